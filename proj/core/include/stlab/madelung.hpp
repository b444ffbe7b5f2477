#pragma once

#include <optional>

#include "stlab/derivatives.hpp"
#include "stlab/field.hpp"
#include "stlab/params.hpp"

namespace stlab {

struct MadelungOptions {
  double eps_mask_u = 1e-10;  // density floor for amplitude-derived fields
  double eps_mask_v = 1e-8;   // density floor for velocity fields (divides by rho)
  int fd_accuracy = 4;        // stencil order on masked runs
};

// A field defined only where mask is set; value is 0 elsewhere. Nodes within
// one stencil width of a run boundary are additionally flagged as edge.
struct MaskedField {
  RealField value;
  Mask mask;
  Mask edge;
};

// U = -(hbar^2 / 2m) * deriv2(R)/R with R = sqrt(rho), on nodes with
// rho >= eps_mask. Throws DataError if everything is below the floor.
MaskedField quantum_potential(const RealField& rho, const PhysParams& params,
                              double eps_mask = 1e-10, int fd_accuracy = 4);

struct VelocityFields {
  RealField v;      // probability current / density
  RealField theta;  // dv/dq on masked runs
  Mask mask;
  Mask edge;
};

// v = J/rho with J = (hbar/m) Im(conj(psi) dpsi/dq); equals (1/m) dS/dq
// wherever rho > 0. The phase S itself is never unwrapped.
VelocityFields velocity_field(const ComplexField& psi, const PhysParams& params,
                              double eps_mask = 1e-8, int fd_accuracy = 4);

// -dU/dq on the masked region.
RealField quantum_force(const RealField& U, const Mask& mask, int fd_accuracy = 4);

// Second derivative per masked run, with edge flags.
MaskedField masked_second_derivative(const RealField& f, const Mask& mask,
                                     int fd_accuracy = 4);

// Minimum of deriv2(U) over the masked interior (edge-flagged nodes excluded
// unless include_edges). Positive result means U is convex on the resolved
// support. Requires at least 5 contiguous masked nodes.
double convexity_min(const RealField& U, const Mask& mask, int fd_accuracy = 4,
                     bool include_edges = false);

// Upper bound 1/|theta0| on the caustic time implied by theta^-1(t) >= theta0^-1 + t.
// Empty when theta0 >= 0.
std::optional<double> caustic_bound(double theta0);

// All Madelung fields extracted from a wave function in one pass.
struct MadelungFields {
  double t = 0.0;
  RealField rho;
  RealField amplitude;  // sqrt(rho)
  RealField U;
  RealField u_xx;  // deriv2 of U on masked runs
  RealField v;
  RealField theta;
  RealField force;
  Mask mask_u, edge_u;
  Mask mask_v, edge_v;
};

MadelungFields analyze(const ComplexField& psi, double t, const PhysParams& params,
                       const MadelungOptions& opts = {});

}  // namespace stlab
