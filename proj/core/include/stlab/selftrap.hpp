#pragma once

#include <cstddef>
#include <vector>

#include "stlab/field.hpp"
#include "stlab/gaussian.hpp"
#include "stlab/params.hpp"

namespace stlab {

struct SolveOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  // Integration stops at u_stop = u0 + 2 ln(1/rho_floor), i.e. when the
  // amplitude has fallen to rho_floor of its central value.
  double rho_floor = 1e-16;
  double x_limit = 100.0;
  // Cap on the step size so the stored nodes stay dense enough for smooth
  // downstream interpolation.
  double h_max = 1e-3;
};

// Solution of u'' = (1/2) u'^2 + u with u(0) = u0, u'(0) = 0, integrated up to
// the blow-up threshold. x = lambda*q, u = beta*U.
struct DimensionlessProfile {
  double u0 = 0.0;
  std::vector<double> x;   // strictly increasing, x[0] = 0
  std::vector<double> u;   // u(x), strictly increasing for x > 0
  std::vector<double> up;  // u'(x)
  double x_m = 0.0;        // blow-up abscissa (dimensionless support half-width)
  double x_m_uncertainty = 0.0;
  double u_stop = 0.0;
  std::size_t steps = 0;
};

DimensionlessProfile solve_dimensionless(double u0, const SolveOptions& opts = {});

// Self-trapped state on a grid: density confined to (-q_m, q_m), zero outside.
struct SelfTrapState {
  PhysParams params;
  double u0 = 0.0;
  Grid grid;
  RealField rho;  // normalized; exactly 0 outside the support
  RealField U;    // u(lambda |q|) / beta on the support, 0 where masked
  Mask support;   // nonzero where |q| < q_m
  double q_m = 0.0;
  double q_m_uncertainty = 0.0;
  double Z = 0.0;  // rho = exp(-beta U) / Z on the support
  double second_moment = 0.0;
};

// Maps the dimensionless profile onto physical units and a concrete grid.
// The grid must be symmetric about 0 and contain the support.
SelfTrapState rescale(const DimensionlessProfile& profile, const PhysParams& params,
                      const Grid& grid);

// Near-extremum approximation U_Q cosh(lambda (q - Q)).
double cosh_approx(double u_extremum, double center, const PhysParams& params, double q);

// Gaussian with the same second moment as the state's density.
GaussianSpec matched_gaussian(const SelfTrapState& state);

}  // namespace stlab
