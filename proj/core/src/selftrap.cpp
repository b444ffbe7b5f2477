#include "stlab/selftrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "stlab/derivatives.hpp"
#include "stlab/errors.hpp"

namespace stlab {

namespace {

// u'' = (1/2) u'^2 + u as a first-order system in (u, p).
struct Rhs {
  double du, dp;
};

inline Rhs rhs(double u, double p) { return {p, 0.5 * p * p + u}; }

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0,
                 A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;

struct StepTrial {
  double u, p, err;
};

StepTrial rk45_step(double u, double p, double h, double atol, double rtol) {
  const Rhs k1 = rhs(u, p);
  const Rhs k2 = rhs(u + h * A21 * k1.du, p + h * A21 * k1.dp);
  const Rhs k3 = rhs(u + h * (A31 * k1.du + A32 * k2.du),
                     p + h * (A31 * k1.dp + A32 * k2.dp));
  const Rhs k4 = rhs(u + h * (A41 * k1.du + A42 * k2.du + A43 * k3.du),
                     p + h * (A41 * k1.dp + A42 * k2.dp + A43 * k3.dp));
  const Rhs k5 = rhs(u + h * (A51 * k1.du + A52 * k2.du + A53 * k3.du + A54 * k4.du),
                     p + h * (A51 * k1.dp + A52 * k2.dp + A53 * k3.dp + A54 * k4.dp));
  const Rhs k6 =
      rhs(u + h * (A61 * k1.du + A62 * k2.du + A63 * k3.du + A64 * k4.du + A65 * k5.du),
          p + h * (A61 * k1.dp + A62 * k2.dp + A63 * k3.dp + A64 * k4.dp + A65 * k5.dp));
  const double un = u + h * (B1 * k1.du + B3 * k3.du + B4 * k4.du + B5 * k5.du + B6 * k6.du);
  const double pn = p + h * (B1 * k1.dp + B3 * k3.dp + B4 * k4.dp + B5 * k5.dp + B6 * k6.dp);
  const Rhs k7 = rhs(un, pn);
  const double eu = h * (E1 * k1.du + E3 * k3.du + E4 * k4.du + E5 * k5.du +
                         E6 * k6.du + E7 * k7.du);
  const double ep = h * (E1 * k1.dp + E3 * k3.dp + E4 * k4.dp + E5 * k5.dp +
                         E6 * k6.dp + E7 * k7.dp);
  const double su = atol + rtol * std::max(std::abs(u), std::abs(un));
  const double sp = atol + rtol * std::max(std::abs(p), std::abs(pn));
  const double ru = eu / su, rp = ep / sp;
  return {un, pn, std::sqrt(0.5 * (ru * ru + rp * rp))};
}

double next_h(double h, double err) {
  const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
  return h * std::clamp(fac, 0.2, 5.0);
}

// Compensated accumulation of the abscissa: near blow-up the accepted steps
// drop below one ulp of x and a naive sum would stall.
inline void acc_add(double& hi, double& lo, double v) {
  const double s = hi + v;
  const double vp = s - hi;
  const double e = (hi - (s - vp)) + (v - vp);
  hi = s;
  lo += e;
  const double t = hi + lo;
  lo -= t - hi;
  hi = t;
}

struct RawSolve {
  std::vector<double> xs, us, ps, hs;  // hs[i] is the step that produced node i
  double x_hi = 0.0, x_lo = 0.0;
  std::size_t steps = 0;
};

RawSolve integrate_free(double u0, double u_stop, const SolveOptions& o) {
  RawSolve r;
  r.xs.push_back(0.0);
  r.us.push_back(u0);
  r.ps.push_back(0.0);
  r.hs.push_back(0.0);
  double u = u0, p = 0.0;
  double h = std::min(o.h_max, 1e-4);
  std::size_t iters = 0;
  while (u < u_stop) {
    if (++iters > 20'000'000) throw DataError("selftrap: step budget exhausted");
    const StepTrial s = rk45_step(u, p, h, o.atol, o.rtol);
    if (s.err <= 1.0) {
      acc_add(r.x_hi, r.x_lo, h);
      u = s.u;
      p = s.p;
      r.xs.push_back(r.x_hi);
      r.us.push_back(u);
      r.ps.push_back(p);
      r.hs.push_back(h);
      ++r.steps;
      if (r.x_hi > o.x_limit) throw DataError("selftrap: no blow-up within x_limit");
      h = std::min(next_h(h, s.err), o.h_max);
    } else {
      h = next_h(h, s.err);
      if (!(h > 1e-300)) throw DataError("selftrap: step size underflow");
    }
  }
  return r;
}

struct TailFit {
  double x_m, residual;
};

// Near blow-up u ~ -2 ln(x_m - x) + C, so z = exp(-u/2) is linear in x and
// extrapolates to zero exactly at x_m. Fit the line on backward distances
// (sums of recorded steps), which stay accurate when x itself has saturated.
TailFit fit_xm(const RawSolve& r) {
  const std::size_t n = r.xs.size();
  std::size_t k = std::max<std::size_t>(8, n / 5);
  if (k >= n) k = n - 1;
  const std::size_t base = n - 1 - k;
  std::vector<double> dist(k + 1);
  dist[k] = 0.0;
  double acc = 0.0;
  for (std::size_t j = k; j > 0; --j) {
    acc += r.hs[base + j];
    dist[j - 1] = acc;
  }
  const double zN = std::exp(-0.5 * r.us[n - 1]);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double dz = std::exp(-0.5 * r.us[base + j]) - zN;
    num += dist[j] * dz;
    den += dz * dz;
  }
  const double A = den > 0.0 ? num / den : 0.0;
  double res = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double dz = std::exp(-0.5 * r.us[base + j]) - zN;
    res = std::max(res, std::abs(dist[j] - A * dz));
  }
  return {r.x_hi + A * zN, res};
}

// Integrate from the origin, landing exactly on each ascending target
// abscissa. Targets at or past the blow-up are reported unreached.
std::vector<double> march_targets(double u0, const std::vector<double>& targets,
                                  double u_cap, const SolveOptions& o,
                                  std::vector<std::uint8_t>& reached) {
  std::vector<double> uv(targets.size(), 0.0);
  reached.assign(targets.size(), 0);
  double u = u0, p = 0.0, hi = 0.0, lo = 0.0;
  double h = std::min(o.h_max, 1e-4);
  std::size_t iters = 0;
  bool dead = false;
  for (std::size_t ti = 0; ti < targets.size() && !dead; ++ti) {
    const double X = targets[ti];
    for (;;) {
      const double rem = X - hi;
      if (rem <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(X))) {
        uv[ti] = u;
        reached[ti] = 1;
        break;
      }
      if (u > u_cap) {
        dead = true;
        break;
      }
      if (++iters > 50'000'000) throw DataError("selftrap: march budget exhausted");
      const double ht = std::min(h, rem);
      const StepTrial s = rk45_step(u, p, ht, o.atol, o.rtol);
      if (s.err <= 1.0) {
        u = s.u;
        p = s.p;
        if (ht == rem) {
          hi = X;
          lo = 0.0;
        } else {
          acc_add(hi, lo, ht);
        }
        if (ht >= h) h = std::min(next_h(h, s.err), o.h_max);
      } else {
        h = next_h(h, s.err);
        if (!(h > 1e-300)) throw DataError("selftrap: step size underflow");
      }
    }
  }
  return uv;
}

}  // namespace

DimensionlessProfile solve_dimensionless(double u0, const SolveOptions& opts) {
  if (!(u0 > 0.0)) throw ConfigError("u0 must be > 0");
  if (!(opts.rho_floor > 0.0) || !(opts.rho_floor < 1.0))
    throw ConfigError("rho_floor must be in (0, 1)");
  if (!(opts.h_max > 0.0)) throw ConfigError("h_max must be > 0");
  const double u_stop = u0 + 2.0 * std::log(1.0 / opts.rho_floor);

  const RawSolve coarse = integrate_free(u0, u_stop, opts);
  const TailFit f1 = fit_xm(coarse);

  SolveOptions tight = opts;
  tight.rtol /= 16.0;
  tight.atol /= 16.0;
  tight.h_max /= 2.0;
  const RawSolve fine = integrate_free(u0, u_stop, tight);
  const TailFit f2 = fit_xm(fine);

  DimensionlessProfile prof;
  prof.u0 = u0;
  prof.u_stop = u_stop;
  prof.steps = coarse.steps;
  prof.x_m = f2.x_m;
  prof.x_m_uncertainty = std::abs(f1.x_m - f2.x_m) + f1.residual + f2.residual;
  prof.x.reserve(coarse.xs.size());
  prof.u.reserve(coarse.xs.size());
  prof.up.reserve(coarse.xs.size());
  for (std::size_t i = 0; i < coarse.xs.size(); ++i) {
    // deep blow-up steps fall below one ulp of x; keep strictly increasing nodes
    if (!prof.x.empty() && !(coarse.xs[i] > prof.x.back())) continue;
    prof.x.push_back(coarse.xs[i]);
    prof.u.push_back(coarse.us[i]);
    prof.up.push_back(coarse.ps[i]);
  }
  return prof;
}

SelfTrapState rescale(const DimensionlessProfile& profile, const PhysParams& params,
                      const Grid& grid) {
  params.validate();
  if (!(profile.u0 > 0.0) || !(profile.x_m > 0.0) || profile.x.empty())
    throw ConfigError("rescale: profile has not been solved");
  const double lam = params.lambda();
  const double q_m = profile.x_m / lam;
  if (std::abs(grid.x_min() + grid.x_max()) > 1e-9 * grid.length())
    throw ConfigError("rescale: grid must be symmetric about 0");
  if (grid.x_max() < q_m * (1.0 - 1e-12))
    throw ConfigError("rescale: grid does not contain the support");

  const std::size_t n = grid.n();
  // Land the integrator on every grid abscissa instead of interpolating the
  // adaptive mesh: interpolation error lives below the grid scale and would
  // dominate second derivatives of the emitted density.
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {lam * std::abs(grid.point(i)), i};
  std::sort(order.begin(), order.end());
  std::vector<double> targets;
  targets.reserve(n);
  for (const auto& [x, i] : order) targets.push_back(x);

  // Second differences of the emitted density amplify node-to-node march
  // error by 1/dx^2, so the march runs two decades tighter than the profile
  // solve.
  SolveOptions march_opts{};
  march_opts.rtol = 1e-12;
  march_opts.atol = 1e-14;
  std::vector<std::uint8_t> reached;
  const std::vector<double> uvals =
      march_targets(profile.u0, targets, profile.u0 + 160.0, march_opts, reached);

  std::vector<double> w(n, 0.0), uu(n, 0.0);
  Mask support(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& [x, i] = order[j];
    if (!reached[j] || x >= profile.x_m) continue;
    support[i] = 1;
    uu[i] = uvals[j] / params.beta;
    w[i] = std::exp(-uvals[j]);
  }
  RealField wf(grid, std::move(w));
  const double Z = integrate(wf);
  if (!(Z > 0.0)) throw DataError("rescale: support not resolved on this grid");

  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = wf[i] / Z;
  RealField rhof(grid, std::move(rho));
  std::vector<double> q2r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = grid.point(i);
    q2r[i] = q * q * rhof[i];
  }
  const double m2 = integrate(RealField(grid, std::move(q2r)));

  return SelfTrapState{params,
                       profile.u0,
                       grid,
                       std::move(rhof),
                       RealField(grid, std::move(uu)),
                       std::move(support),
                       q_m,
                       profile.x_m_uncertainty / lam,
                       Z,
                       m2};
}

double cosh_approx(double u_extremum, double center, const PhysParams& params, double q) {
  return u_extremum * std::cosh(params.lambda() * (q - center));
}

GaussianSpec matched_gaussian(const SelfTrapState& state) {
  if (!(state.second_moment > 0.0))
    throw ConfigError("matched_gaussian: second moment must be positive");
  return GaussianSpec{std::sqrt(state.second_moment), state.params};
}

}  // namespace stlab
