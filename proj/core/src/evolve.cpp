#include "stlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "stlab/derivatives.hpp"
#include "stlab/errors.hpp"
#include "stlab/fft.hpp"

namespace stlab {

namespace {

std::vector<std::complex<double>> kinetic_factors(const Grid& grid, double dt,
                                                  const PhysParams& params) {
  const std::vector<double> k = wavenumbers(grid);
  std::vector<std::complex<double>> f(k.size());
  const double c = params.hbar * dt / (2.0 * params.m);
  for (std::size_t i = 0; i < k.size(); ++i)
    f[i] = std::exp(std::complex<double>(0.0, -c * k[i] * k[i]));
  return f;
}

double masked_min(const RealField& f, const Mask& mask, const Mask& edge) {
  double mn = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i] || edge[i]) continue;
    if (std::isnan(mn) || f[i] < mn) mn = f[i];
  }
  return mn;
}

// interpolation inside the masked region; returns nothing when the stencil
// leaves the grid or touches unmasked nodes
std::optional<double> sample_masked(const RealField& f, const Mask& mask, double q,
                                    bool cubic) {
  const Grid& g = f.grid();
  const double s = (q - g.x_min()) / g.dx();
  const double fi = std::floor(s);
  if (fi < 0.0 || fi >= static_cast<double>(g.n() - 1)) return std::nullopt;
  const auto i = static_cast<std::size_t>(fi);
  const double t = s - fi;
  if (cubic && i >= 1 && i + 2 < g.n() && mask[i - 1] && mask[i] && mask[i + 1] &&
      mask[i + 2]) {
    const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w0 = (t * t - 1.0) * (t - 2.0) / 2.0;
    const double w1 = -t * (t + 1.0) * (t - 2.0) / 2.0;
    const double w2 = t * (t * t - 1.0) / 6.0;
    return wm1 * f[i - 1] + w0 * f[i] + w1 * f[i + 1] + w2 * f[i + 2];
  }
  if (!mask[i] || !mask[i + 1]) return std::nullopt;
  return (1.0 - t) * f[i] + t * f[i + 1];
}

}  // namespace

ComplexField step(const ComplexField& psi, double dt, const PhysParams& params) {
  params.validate();
  require_finite(psi, "step psi");
  const Grid& g = psi.grid();
  if (g.mode() != GridMode::periodic) throw ConfigError("step requires a periodic grid");
  const std::vector<std::complex<double>> factors = kinetic_factors(g, dt, params);
  Fft fft(g.n());
  std::vector<std::complex<double>> data = psi.values();
  fft.forward(data);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factors[i];
  fft.inverse(data);
  return ComplexField(g, std::move(data));
}

std::vector<double> EvolutionRecord::times() const {
  std::vector<double> t(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) t[i] = snapshots[i].t;
  return t;
}

EvolutionRecord run(const ComplexField& psi0, const PhaseSpec& phase,
                    const EvolutionConfig& config) {
  config.params.validate();
  if (!(config.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (config.t_end < 0.0) throw ConfigError("t_end must be >= 0");
  if (config.observer_stride < 1) throw ConfigError("observer_stride must be >= 1");
  require_finite(psi0, "run psi0");
  const Grid& g = psi0.grid();
  if (g.mode() != GridMode::periodic) throw ConfigError("run requires a periodic grid");

  const std::size_t n = g.n();
  std::vector<double> rho0(n);
  for (std::size_t i = 0; i < n; ++i) rho0[i] = std::norm(psi0[i]);
  if (std::abs(integrate(RealField(g, rho0)) - 1.0) > 1e-8)
    throw ConfigError("run: psi0 not normalized");

  // the evolution starts from |psi0| with the requested phase stamped on
  std::vector<std::complex<double>> cur(n);
  switch (phase.kind) {
    case PhaseSpec::Kind::zero:
      for (std::size_t i = 0; i < n; ++i) cur[i] = std::abs(psi0[i]);
      break;
    case PhaseSpec::Kind::quadratic:
      for (std::size_t i = 0; i < n; ++i) {
        const double q = g.point(i);
        const double S = 0.5 * config.params.m * phase.a * q * q;
        cur[i] = std::abs(psi0[i]) *
                 std::exp(std::complex<double>(0.0, S / config.params.hbar));
      }
      break;
    case PhaseSpec::Kind::custom: {
      if (!phase.s) throw ConfigError("custom phase requires a phase field");
      if (!(phase.s->grid() == g)) throw ConfigError("phase field grid mismatch");
      for (std::size_t i = 0; i < n; ++i)
        cur[i] = std::abs(psi0[i]) *
                 std::exp(std::complex<double>(0.0, (*phase.s)[i] / config.params.hbar));
      break;
    }
  }
  ComplexField psi(g, std::move(cur));

  const auto n_steps = static_cast<long long>(std::llround(config.t_end / config.dt));
  const std::vector<std::complex<double>> factors = kinetic_factors(g, config.dt, config.params);
  Fft fft(n);
  const std::vector<double> k = wavenumbers(g);
  double k_edge = 0.0;
  for (double kk : k) k_edge = std::max(k_edge, std::abs(kk));
  k_edge *= 0.9;

  std::vector<Snapshot> snaps;
  std::optional<double> T_convexity, t_near_caustic;
  bool leak = false, nonfinite = false;

  auto observe = [&](double t) -> bool {  // false: stop the run
    if (!psi.finite()) {
      nonfinite = true;
      return false;
    }
    const MadelungFields mf = analyze(psi, t, config.params, config.madelung);
    const double norm = integrate(mf.rho);
    std::vector<double> qr(n), q2r(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = g.point(i);
      qr[i] = q * mf.rho[i];
      q2r[i] = q * q * mf.rho[i];
    }
    const double m1 = integrate(RealField(g, std::move(qr)));
    const double m2 = integrate(RealField(g, std::move(q2r)));
    const double variance = m2 - m1 * m1;

    const double conv = masked_min(mf.u_xx, mf.mask_u, mf.edge_u);
    const double th_min = masked_min(mf.theta, mf.mask_v, mf.edge_v);

    std::vector<std::complex<double>> spec = psi.values();
    fft.forward(spec);
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::norm(spec[i]);
      total += e;
      if (std::abs(k[i]) >= k_edge) tail += e;
    }
    const double boundary = std::max(mf.rho[0], mf.rho[n - 1]);

    Snapshot s{t,
               mf.v,
               mf.theta,
               mf.u_xx,
               mf.mask_v,
               mf.edge_v,
               norm,
               variance,
               conv,
               th_min,
               total > 0.0 ? tail / total : 0.0,
               boundary,
               std::nullopt};
    if (config.store_psi) s.psi = psi;
    snaps.push_back(std::move(s));

    if (!T_convexity && conv < 0.0) T_convexity = t;
    if (!t_near_caustic && th_min < config.theta_blowup_threshold) t_near_caustic = t;
    if (boundary > config.boundary_leak_tol) {
      leak = true;
      return false;
    }
    return true;
  };

  bool alive = observe(0.0);
  for (long long j = 1; alive && j <= n_steps; ++j) {
    std::vector<std::complex<double>> data = psi.values();
    fft.forward(data);
    for (std::size_t i = 0; i < n; ++i) data[i] *= factors[i];
    fft.inverse(data);
    psi = ComplexField(g, std::move(data));
    if (j % config.observer_stride == 0 || j == n_steps)
      alive = observe(static_cast<double>(j) * config.dt);
  }

  return EvolutionRecord{g,
                         config.params,
                         config.dt,
                         config.observer_stride,
                         std::move(snaps),
                         std::move(psi),
                         T_convexity,
                         t_near_caustic,
                         leak,
                         nonfinite};
}

std::vector<TracePoint> lagrangian_trace(const EvolutionRecord& record, double q0) {
  if (record.snapshots.empty()) throw ConfigError("lagrangian_trace: empty record");
  const Snapshot& s0 = record.snapshots.front();
  if (!sample_masked(s0.v, s0.mask_v, q0, false))
    throw ConfigError("lagrangian_trace: q0 outside the velocity mask");

  std::vector<TracePoint> trace;
  double q = q0;
  for (std::size_t j = 0; j < record.snapshots.size(); ++j) {
    const Snapshot& a = record.snapshots[j];
    const auto th = sample_masked(a.theta, a.mask_v, q, true);
    if (!th) break;
    trace.push_back(TracePoint{a.t, q, *th});
    // diagnostics stop once a near-caustic has been recorded
    if (record.t_near_caustic && a.t >= *record.t_near_caustic) break;
    if (j + 1 == record.snapshots.size()) break;

    const Snapshot& b = record.snapshots[j + 1];
    const double h = b.t - a.t;
    const auto va = sample_masked(a.v, a.mask_v, q, false);
    if (!va) break;
    const double q_half = q + 0.5 * h * (*va);
    const auto vha = sample_masked(a.v, a.mask_v, q_half, false);
    const auto vhb = sample_masked(b.v, b.mask_v, q_half, false);
    if (!vha || !vhb) break;
    q += h * 0.5 * (*vha + *vhb);
  }
  return trace;
}

ResidualStats theta_transport_residual(const EvolutionRecord& record,
                                       std::span<const double> seeds) {
  ResidualStats stats;
  for (double q0 : seeds) {
    const std::vector<TracePoint> trace = lagrangian_trace(record, q0);
    for (std::size_t j = 1; j + 1 < trace.size(); ++j) {
      const Snapshot& snap = record.snapshots[j];
      const auto uxx = sample_masked(snap.u_xx, snap.mask_v, trace[j].q, true);
      if (!uxx) continue;
      const double dth =
          (trace[j + 1].theta - trace[j - 1].theta) / (trace[j + 1].t - trace[j - 1].t);
      const double res = record.params.m * dth +
                         record.params.m * trace[j].theta * trace[j].theta + *uxx;
      stats.max_abs = std::max(stats.max_abs, std::abs(res));
      ++stats.samples;
    }
  }
  return stats;
}

}  // namespace stlab
