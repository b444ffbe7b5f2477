#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stlab/grid.hpp"
#include "stlab/madelung.hpp"
#include "stlab/params.hpp"
#include "stlab/selftrap.hpp"

namespace stlab::cli {

// Everything the four commands can consume, filled from a sectioned key=value
// config file plus --set overrides. Unknown keys are rejected by name.
struct RunConfig {
  PhysParams params;

  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n = 4096;
  GridMode mode = GridMode::bounded;

  std::optional<double> u0;
  SolveOptions solve;

  std::string source = "selftrap";  // evolve initial state: selftrap | gaussian
  double sigma = 1.0;               // gaussian source width
  double dt = 1e-4;
  double t_end = 0.1;
  int observer_stride = 1;
  std::string phase = "zero";  // zero | quadratic
  double theta0 = 0.0;
  MadelungOptions madelung;
  double theta_blowup_threshold = -1e3;
  double boundary_leak_tol = 1e-8;

  bool emit_csv = true;
  bool emit_json = true;

  Grid make_grid() const { return Grid(x_min, x_max, n, mode); }
};

// Parses the file (empty path = all defaults), then applies overrides of the
// form "section.key=value" in order.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

void apply_override(RunConfig& cfg, const std::string& assignment);

}  // namespace stlab::cli
