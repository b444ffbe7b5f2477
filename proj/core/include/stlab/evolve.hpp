#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stlab/field.hpp"
#include "stlab/gaussian.hpp"
#include "stlab/madelung.hpp"
#include "stlab/params.hpp"

namespace stlab {

// One exact kinetic step: multiply each momentum mode k by
// exp(-i hbar k^2 dt / 2m). Periodic grid with even n.
ComplexField step(const ComplexField& psi, double dt, const PhysParams& params);

struct PhaseSpec {
  enum class Kind { zero, quadratic, custom };
  Kind kind = Kind::zero;
  double a = 0.0;                // quadratic: S = m a q^2 / 2, so theta0 = a
  std::optional<RealField> s;    // custom phase S(q)
};

struct EvolutionConfig {
  double dt = 1e-4;
  double t_end = 0.1;
  PhysParams params;
  int observer_stride = 1;
  double theta_blowup_threshold = -1e3;
  double boundary_leak_tol = 1e-8;
  bool store_psi = false;  // keep psi in every snapshot (memory!)
  MadelungOptions madelung;
};

struct Snapshot {
  double t = 0.0;
  RealField v, theta, u_xx;
  Mask mask_v, edge_v;
  double norm = 0.0;
  double variance = 0.0;
  double convexity_min = 0.0;
  double theta_min = 0.0;
  double spectral_tail = 0.0;     // |psi_hat|^2 fraction in the top decade of |k|
  double boundary_density = 0.0;  // max rho near the wrap point
  std::optional<ComplexField> psi;
};

struct EvolutionRecord {
  Grid grid;
  PhysParams params;
  double dt = 0.0;
  int observer_stride = 1;
  std::vector<Snapshot> snapshots;
  ComplexField psi_final;
  std::optional<double> T_convexity;     // first sample time with convexity_min < 0
  std::optional<double> t_near_caustic;  // first sample time with theta_min < threshold
  bool aborted_leak = false;
  bool aborted_nonfinite = false;

  std::vector<double> times() const;
};

// Applies the phase to |psi0| and propagates to t_end, recording diagnostics
// every observer_stride steps. Stops early on boundary leak or non-finite
// values (flagged on the record); a near-caustic sample is recorded and ends
// trace diagnostics but does not stop the run.
EvolutionRecord run(const ComplexField& psi0, const PhaseSpec& phase,
                    const EvolutionConfig& config);

struct TracePoint {
  double t = 0.0;
  double q = 0.0;
  double theta = 0.0;
};

// Integrates dq/dt = v(q,t) through the stored snapshots (midpoint rule,
// linear interpolation of v in q and t). Ends early if the trace leaves the
// velocity mask. q0 must be masked at t = 0.
std::vector<TracePoint> lagrangian_trace(const EvolutionRecord& record, double q0);

struct ResidualStats {
  double max_abs = 0.0;
  std::size_t samples = 0;
};

// Residual of m d_t(theta) + m theta^2 + d^2U/dq^2 = 0 along traces from the
// given seeds, with centered time differences at interior samples.
ResidualStats theta_transport_residual(const EvolutionRecord& record,
                                       std::span<const double> seeds);

}  // namespace stlab
