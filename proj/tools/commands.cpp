#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stlab/errors.hpp"
#include "stlab/evolve.hpp"
#include "stlab/gaussian.hpp"
#include "stlab/selftrap.hpp"

namespace stlab::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

void write_json(const fs::path& dir, const std::string& name, const ordered_json& j) {
  std::ofstream out = open_out(dir, name);
  out << j.dump(2) << "\n";
}

ordered_json params_json(const PhysParams& p) {
  return ordered_json{{"hbar", p.hbar}, {"m", p.m}, {"beta", p.beta}};
}

SelfTrapState make_state(const RunConfig& cfg) {
  if (!cfg.u0) throw ConfigError("u0 required");
  const DimensionlessProfile prof = solve_dimensionless(*cfg.u0, cfg.solve);
  return rescale(prof, cfg.params, cfg.make_grid());
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  std::size_t rows = 0;
};

Csv read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) csv.header.push_back(tok);
  csv.cols.resize(csv.header.size());
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, tok, ',')) {
      if (c >= csv.cols.size()) throw DataError(path.string() + ": ragged row");
      csv.cols[c++].push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (c != csv.cols.size()) throw DataError(path.string() + ": ragged row");
    ++csv.rows;
  }
  return csv;
}

std::size_t nearest_to_zero(const Grid& g) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.n(); ++i)
    if (std::abs(g.point(i)) < std::abs(g.point(best))) best = i;
  return best;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir) {
  const SelfTrapState state = make_state(cfg);
  const Grid& g = state.grid;
  const double U0 = state.u0 / cfg.params.beta;

  if (cfg.emit_csv) {
    std::ofstream out = open_out(out_dir, "selftrap_profile.csv");
    out << "q,rho,U,U_cosh_approx,R\n";
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double q = g.point(i);
      out << fmt(q) << ',' << fmt(state.rho[i]) << ',' << fmt(state.U[i]) << ','
          << fmt(cosh_approx(U0, 0.0, cfg.params, q)) << ','
          << fmt(std::sqrt(state.rho[i])) << "\n";
    }
  }
  if (cfg.emit_json) {
    ordered_json j{{"u0", state.u0},
                   {"lambda", cfg.params.lambda()},
                   {"q_m", state.q_m},
                   {"q_m_uncertainty", state.q_m_uncertainty},
                   {"Z", state.Z},
                   {"second_moment", state.second_moment},
                   {"params", params_json(cfg.params)},
                   {"grid", ordered_json{{"x_min", g.x_min()},
                                         {"x_max", g.x_max()},
                                         {"n", g.n()},
                                         {"mode", g.mode() == GridMode::bounded
                                                      ? "bounded"
                                                      : "periodic"}}}};
    write_json(out_dir, "summary.json", j);
  }
  return 0;
}

int cmd_compare(const RunConfig& cfg, const fs::path& out_dir) {
  const SelfTrapState state = make_state(cfg);
  const Grid& g = state.grid;
  const GaussianSpec gspec = matched_gaussian(state);
  const RealField rho_g = gaussian_density(gspec, 0.0, g);

  if (cfg.emit_csv) {
    std::ofstream out = open_out(out_dir, "compare.csv");
    out << "q,rho_selftrap,rho_gaussian\n";
    for (std::size_t i = 0; i < g.n(); ++i)
      out << fmt(g.point(i)) << ',' << fmt(state.rho[i]) << ',' << fmt(rho_g[i]) << "\n";
  }
  if (cfg.emit_json) {
    const std::size_t c = nearest_to_zero(g);
    ordered_json j{{"sigma", gspec.sigma},
                   {"q_m", state.q_m},
                   {"peak_ratio", rho_g[c] / state.rho[c]},
                   {"second_moment", state.second_moment},
                   {"params", params_json(cfg.params)}};
    write_json(out_dir, "compare.json", j);
  }
  return 0;
}

int cmd_evolve(const RunConfig& cfg, const fs::path& out_dir) {
  const Grid g = cfg.make_grid();
  if (g.mode() != GridMode::periodic)
    throw ConfigError("grid.mode: evolve requires a periodic grid");

  EvolutionConfig ec;
  ec.dt = cfg.dt;
  ec.t_end = cfg.t_end;
  ec.params = cfg.params;
  ec.observer_stride = cfg.observer_stride;
  ec.theta_blowup_threshold = cfg.theta_blowup_threshold;
  ec.boundary_leak_tol = cfg.boundary_leak_tol;
  ec.madelung = cfg.madelung;

  PhaseSpec phase;
  if (cfg.phase == "quadratic") {
    phase.kind = PhaseSpec::Kind::quadratic;
    phase.a = cfg.theta0;
  }

  std::optional<EvolutionRecord> rec;
  if (cfg.source == "gaussian") {
    const GaussianSpec gs{cfg.sigma, cfg.params};
    rec = run(gaussian_analytic(gs, 0.0, g).psi, phase, ec);
  } else {
    const SelfTrapState state = make_state(cfg);
    std::vector<std::complex<double>> psi0(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) psi0[i] = std::sqrt(state.rho[i]);
    rec = run(ComplexField(g, std::move(psi0)), phase, ec);
  }

  if (cfg.emit_csv) {
    std::ofstream out = open_out(out_dir, "timeseries.csv");
    out << "t,norm,variance,convexity_min,theta_min\n";
    for (const Snapshot& s : rec->snapshots)
      out << fmt(s.t) << ',' << fmt(s.norm) << ',' << fmt(s.variance) << ','
          << fmt(s.convexity_min) << ',' << fmt(s.theta_min) << "\n";
  }
  if (cfg.emit_json) {
    const auto opt = [](const std::optional<double>& v) {
      return v ? ordered_json(*v) : ordered_json(nullptr);
    };
    std::optional<double> bound;
    if (cfg.phase == "quadratic") bound = caustic_bound(cfg.theta0);
    ordered_json j{{"source", cfg.source},
                   {"phase", cfg.phase},
                   {"theta0", cfg.phase == "quadratic" ? ordered_json(cfg.theta0)
                                                       : ordered_json(nullptr)},
                   {"dt", rec->dt},
                   {"t_end", cfg.t_end},
                   {"observer_stride", rec->observer_stride},
                   {"snapshots", rec->snapshots.size()},
                   {"T_convexity", opt(rec->T_convexity)},
                   {"t_near_caustic", opt(rec->t_near_caustic)},
                   {"caustic_bound", opt(bound)},
                   {"aborted_leak", rec->aborted_leak},
                   {"aborted_nonfinite", rec->aborted_nonfinite},
                   {"params", params_json(cfg.params)}};
    write_json(out_dir, "evolution.json", j);
  }
  return 0;
}

int cmd_diagnose(const fs::path& dir) {
  const fs::path csv_path = dir / "selftrap_profile.csv";
  const fs::path json_path = dir / "summary.json";
  if (!fs::exists(csv_path)) throw ConfigError("missing " + csv_path.string());
  if (!fs::exists(json_path)) throw ConfigError("missing " + json_path.string());

  std::ifstream jin(json_path);
  ordered_json summary;
  try {
    jin >> summary;
  } catch (const std::exception& e) {
    throw DataError("summary.json: " + std::string(e.what()));
  }
  const double beta = summary.at("params").at("beta").get<double>();
  const double q_m = summary.at("q_m").get<double>();

  const Csv csv = read_csv(csv_path);
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name;
    if (!ok) {
      std::cout << ": " << detail;
      ++failures;
    }
    std::cout << "\n";
  };

  const bool header_ok =
      csv.header == std::vector<std::string>{"q", "rho", "U", "U_cosh_approx", "R"};
  report("header", header_ok, "unexpected columns");
  if (!header_ok || csv.rows < 8) {
    report("structure", false, "too few rows to diagnose");
    return 1;
  }
  const std::vector<double>& q = csv.cols[0];
  const std::vector<double>& rho = csv.cols[1];
  const std::vector<double>& U = csv.cols[2];
  const std::vector<double>& R = csv.cols[4];
  const std::size_t n = csv.rows;
  const double dx = (q.back() - q.front()) / static_cast<double>(n - 1);

  // normalization by trapezoid
  double mass = 0.5 * (rho.front() + rho.back());
  for (std::size_t i = 1; i + 1 < n; ++i) mass += rho[i];
  mass *= dx;
  report("normalization", std::abs(mass - 1.0) <= 1e-6,
         "integral = " + fmt(mass));

  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    asym = std::max(asym, std::abs(rho[i] - rho[n - 1 - i]));
  report("symmetry", asym <= 1e-8, "max asymmetry = " + fmt(asym));

  bool support_ok = true;
  for (std::size_t i = 0; i < n && support_ok; ++i) {
    if (std::abs(q[i]) >= q_m && rho[i] != 0.0) support_ok = false;
    if (std::abs(q[i]) < q_m - 1e-9 && !(rho[i] > 0.0)) support_ok = false;
  }
  report("support", support_ok, "density does not vanish exactly outside q_m");

  double r_err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    r_err = std::max(r_err, std::abs(R[i] - std::sqrt(rho[i])));
  report("amplitude", r_err <= 1e-12, "max |R - sqrt(rho)| = " + fmt(r_err));

  // interior of the well-resolved region
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i)
    if (rho[i] > 1e-6) idx.push_back(i);
  bool convex_ok = !idx.empty();
  double conv_min = 0.0;
  if (idx.size() > 8) {
    conv_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 2; j + 2 < idx.size(); ++j) {
      const std::size_t i = idx[j];
      if (i == 0 || i + 1 >= n) continue;
      conv_min = std::min(conv_min, (U[i - 1] - 2.0 * U[i] + U[i + 1]) / (dx * dx));
    }
    convex_ok = conv_min > 0.0;
  }
  report("convexity", convex_ok, "min d2U = " + fmt(conv_min));

  // ln rho against U should be linear with slope -beta
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const std::size_t i : idx) {
    const double x = U[i], y = std::log(rho[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double cnt = static_cast<double>(idx.size());
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  report("density-potential relation", std::abs(slope + beta) <= 0.01 * std::abs(beta),
         "regression slope = " + fmt(slope) + ", expected " + fmt(-beta));

  return failures == 0 ? 0 : 1;
}

}  // namespace stlab::cli
