#pragma once

#include "stlab/field.hpp"
#include "stlab/params.hpp"

namespace stlab {

// Free spreading wave packet, the analytic baseline. sigma is the density
// standard deviation at t = 0.
struct GaussianSpec {
  double sigma = 1.0;
  PhysParams params;
};

// sigma_t^2 = sigma^2 + hbar^2 t^2 / (4 m^2 sigma^2)
double gaussian_sigma_t(const GaussianSpec& spec, double t);

// Normalized density (2 pi sigma_t^2)^(-1/2) exp(-q^2 / 2 sigma_t^2),
// evaluated directly; no grid-width requirement.
RealField gaussian_density(const GaussianSpec& spec, double t, const Grid& grid);

// Quantum potential of the spreading packet at (q, t):
//   -hbar^2 q^2 / (8 m sigma_t^4) + hbar^2 / (4 m sigma_t^2)
double gaussian_quantum_potential(const GaussianSpec& spec, double t, double q);

struct GaussianFields {
  RealField rho;
  RealField U;
  ComplexField psi;
  double sigma_t = 0.0;
};

// Full analytic solution sampled on the grid. Requires the grid wide enough
// that the boundary density is below 1e-14 of the peak, so the fields are
// usable as initial/reference data for periodic propagation.
GaussianFields gaussian_analytic(const GaussianSpec& spec, double t, const Grid& grid);

}  // namespace stlab
