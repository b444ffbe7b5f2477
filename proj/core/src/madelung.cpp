#include "stlab/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "stlab/errors.hpp"

namespace stlab {

namespace {

bool all_set(const Mask& mask) {
  return std::all_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; });
}

// Derivative of f restricted to contiguous masked runs, one-sided at run
// boundaries. Runs too short for an order-2 stencil are dropped from the
// mask; runs too short for the requested accuracy fall back to order 2.
// Nodes within a half stencil of a run boundary are flagged edge.
void per_run_derivative(const RealField& f, Mask& mask, int m, int accuracy,
                        RealField& out, Mask& edge) {
  const std::size_t n = f.size();
  edge.assign(n, 0);
  if (f.grid().mode() == GridMode::periodic && all_set(mask)) {
    const DiffBackend be = accuracy == 4 ? DiffBackend::fd4 : DiffBackend::fd2;
    out = m == 1 ? deriv1(f, be) : deriv2(f, be);
    return;
  }
  const double dx = f.grid().dx();
  for (const auto& [b, e] : mask_runs(mask)) {
    const std::size_t len = e - b;
    int acc = accuracy;
    if (len < static_cast<std::size_t>(m + acc)) acc = 2;
    if (len < static_cast<std::size_t>(m + acc)) {
      for (std::size_t i = b; i < e; ++i) mask[i] = 0;
      continue;
    }
    const std::span<const double> seg(f.values().data() + b, len);
    const std::vector<double> d = segment_derivative(seg, dx, m, acc);
    for (std::size_t i = 0; i < len; ++i) out[b + i] = d[i];
    const auto half = static_cast<std::size_t>((m + acc - 1) / 2);
    for (std::size_t i = 0; i < half && i < len; ++i) {
      edge[b + i] = 1;
      edge[e - 1 - i] = 1;
    }
  }
}

void check_fd_accuracy(int fd_accuracy) {
  if (fd_accuracy != 2 && fd_accuracy != 4)
    throw ConfigError("fd_accuracy must be 2 or 4");
}

}  // namespace

MaskedField quantum_potential(const RealField& rho, const PhysParams& params,
                              double eps_mask, int fd_accuracy) {
  params.validate();
  check_fd_accuracy(fd_accuracy);
  if (!(eps_mask > 0.0)) throw ConfigError("eps_mask must be > 0");
  require_finite(rho, "quantum_potential density");
  for (double r : rho)
    if (r < 0.0) throw DataError("quantum_potential: negative density");
  if (std::abs(integrate(rho) - 1.0) > 1e-3)
    throw ConfigError("quantum_potential: density not normalized");

  const std::size_t n = rho.size();
  Mask mask(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (rho[i] >= eps_mask) mask[i] = 1;

  RealField R(rho.grid());
  for (std::size_t i = 0; i < n; ++i) R[i] = std::sqrt(rho[i]);

  RealField d2(rho.grid());
  Mask edge;
  per_run_derivative(R, mask, 2, fd_accuracy, d2, edge);
  if (!std::any_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; }))
    throw DataError("quantum_potential: density below floor everywhere");

  RealField U(rho.grid());
  const double c = params.hbar * params.hbar / (2.0 * params.m);
  for (std::size_t i = 0; i < n; ++i)
    if (mask[i]) U[i] = -c * d2[i] / R[i];
  return MaskedField{std::move(U), std::move(mask), std::move(edge)};
}

VelocityFields velocity_field(const ComplexField& psi, const PhysParams& params,
                              double eps_mask, int fd_accuracy) {
  params.validate();
  check_fd_accuracy(fd_accuracy);
  if (!(eps_mask > 0.0)) throw ConfigError("eps_mask must be > 0");
  require_finite(psi, "velocity_field psi");

  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(psi[i]);
  const RealField rhof(g, std::move(rho));
  if (std::abs(integrate(rhof) - 1.0) > 1e-3)
    throw ConfigError("velocity_field: psi not normalized");

  const DiffBackend be = fd_accuracy == 4 ? DiffBackend::fd4 : DiffBackend::fd2;
  const ComplexField dpsi = deriv1(psi, be);

  Mask mask(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (rhof[i] >= eps_mask) mask[i] = 1;

  RealField v(g);
  const double hm = params.hbar / params.m;
  for (std::size_t i = 0; i < n; ++i)
    if (mask[i]) v[i] = hm * std::imag(std::conj(psi[i]) * dpsi[i]) / rhof[i];

  RealField theta(g);
  Mask edge;
  per_run_derivative(v, mask, 1, fd_accuracy, theta, edge);
  if (!std::any_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; }))
    throw DataError("velocity_field: density below floor everywhere");
  for (std::size_t i = 0; i < n; ++i)
    if (!mask[i]) v[i] = 0.0;
  return VelocityFields{std::move(v), std::move(theta), std::move(mask), std::move(edge)};
}

RealField quantum_force(const RealField& U, const Mask& mask, int fd_accuracy) {
  check_fd_accuracy(fd_accuracy);
  require_finite(U, "quantum_force U");
  if (mask.size() != U.size()) throw ConfigError("quantum_force: mask length mismatch");
  Mask live = mask;
  RealField d1(U.grid());
  Mask edge;
  per_run_derivative(U, live, 1, fd_accuracy, d1, edge);
  for (std::size_t i = 0; i < U.size(); ++i) d1[i] = live[i] ? -d1[i] : 0.0;
  return d1;
}

MaskedField masked_second_derivative(const RealField& f, const Mask& mask,
                                     int fd_accuracy) {
  check_fd_accuracy(fd_accuracy);
  require_finite(f, "masked_second_derivative input");
  if (mask.size() != f.size())
    throw ConfigError("masked_second_derivative: mask length mismatch");
  Mask live = mask;
  RealField d2(f.grid());
  Mask edge;
  per_run_derivative(f, live, 2, fd_accuracy, d2, edge);
  return MaskedField{std::move(d2), std::move(live), std::move(edge)};
}

double convexity_min(const RealField& U, const Mask& mask, int fd_accuracy,
                     bool include_edges) {
  std::size_t longest = 0;
  for (const auto& [b, e] : mask_runs(mask)) longest = std::max(longest, e - b);
  if (longest < 5)
    throw ConfigError("convexity_min: need at least 5 contiguous masked nodes");
  const MaskedField d2 = masked_second_derivative(U, mask, fd_accuracy);
  double mn = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (!d2.mask[i]) continue;
    if (!include_edges && d2.edge[i]) continue;
    mn = std::min(mn, d2.value[i]);
    found = true;
  }
  if (!found) throw DataError("convexity_min: no interior nodes to evaluate");
  return mn;
}

std::optional<double> caustic_bound(double theta0) {
  if (theta0 < 0.0) return 1.0 / std::abs(theta0);
  return std::nullopt;
}

MadelungFields analyze(const ComplexField& psi, double t, const PhysParams& params,
                       const MadelungOptions& opts) {
  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(psi[i]);
  RealField rhof(g, std::move(rho));

  MaskedField U = quantum_potential(rhof, params, opts.eps_mask_u, opts.fd_accuracy);
  MaskedField uxx = masked_second_derivative(U.value, U.mask, opts.fd_accuracy);
  Mask edge_u = U.edge;
  for (std::size_t i = 0; i < n; ++i)
    if (uxx.edge[i]) edge_u[i] = 1;

  VelocityFields vel = velocity_field(psi, params, opts.eps_mask_v, opts.fd_accuracy);
  RealField force = quantum_force(U.value, U.mask, opts.fd_accuracy);

  RealField amp(g);
  for (std::size_t i = 0; i < n; ++i) amp[i] = std::sqrt(rhof[i]);

  return MadelungFields{t,
                        std::move(rhof),
                        std::move(amp),
                        std::move(U.value),
                        std::move(uxx.value),
                        std::move(vel.v),
                        std::move(vel.theta),
                        std::move(force),
                        std::move(uxx.mask),
                        std::move(edge_u),
                        std::move(vel.mask),
                        std::move(vel.edge)};
}

}  // namespace stlab
