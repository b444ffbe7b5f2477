#include "stlab/gaussian.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "stlab/errors.hpp"

namespace stlab {

namespace {
void check_spec(const GaussianSpec& spec) {
  spec.params.validate();
  if (!(spec.sigma > 0.0)) throw ConfigError("gaussian sigma must be > 0");
}
}  // namespace

double gaussian_sigma_t(const GaussianSpec& spec, double t) {
  check_spec(spec);
  const double h = spec.params.hbar, m = spec.params.m, s = spec.sigma;
  return std::sqrt(s * s + h * h * t * t / (4.0 * m * m * s * s));
}

RealField gaussian_density(const GaussianSpec& spec, double t, const Grid& grid) {
  const double st = gaussian_sigma_t(spec, t);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * st * st);
  return RealField::sample(
      grid, [&](double q) { return norm * std::exp(-q * q / (2.0 * st * st)); });
}

double gaussian_quantum_potential(const GaussianSpec& spec, double t, double q) {
  const double st = gaussian_sigma_t(spec, t);
  const double h2m = spec.params.hbar * spec.params.hbar / spec.params.m;
  return -h2m * q * q / (8.0 * st * st * st * st) + h2m / (4.0 * st * st);
}

GaussianFields gaussian_analytic(const GaussianSpec& spec, double t, const Grid& grid) {
  const double st = gaussian_sigma_t(spec, t);
  const double edge = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
  // boundary density relative to the peak
  if (std::exp(-edge * edge / (2.0 * st * st)) >= 1e-14)
    throw ConfigError("gaussian_analytic: grid too narrow for the packet");

  const double s = spec.sigma, h = spec.params.hbar, m = spec.params.m;
  const std::complex<double> D(1.0, h * t / (2.0 * m * s * s));
  const std::complex<double> pref =
      std::pow(2.0 * std::numbers::pi * s * s, -0.25) / std::sqrt(D);
  std::vector<std::complex<double>> psi(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double q = grid.point(i);
    psi[i] = pref * std::exp(-q * q / (4.0 * s * s * D));
  }
  RealField U = RealField::sample(
      grid, [&](double q) { return gaussian_quantum_potential(spec, t, q); });
  return GaussianFields{gaussian_density(spec, t, grid), std::move(U),
                        ComplexField(grid, std::move(psi)), st};
}

}  // namespace stlab
