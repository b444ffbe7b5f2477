#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch() {
  static const fs::path root =
      fs::temp_directory_path() / ("stlab_cli_" + std::to_string(::getpid()));
  fs::create_directories(root);
  return root;
}

Outcome run_tool(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(SELFTRAP_LAB_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

const std::string base_config = R"([params]
hbar = 1.0
m = 1.0
beta = 1.0

[grid]
x_min = -1.2
x_max = 1.2
n = 513
mode = bounded

[selftrap]
u0 = 1.0
)";

fs::path write_base_config() {
  const fs::path p = scratch() / "solve.cfg";
  spit(p, base_config);
  return p;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_csv(const fs::path& p) {
  Table t;
  std::ifstream in(p);
  std::string line;
  REQUIRE(std::getline(in, line));
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) t.header.push_back(tok);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

TEST_CASE("solve emits deterministic artifacts") {
  const fs::path cfg = write_base_config();
  const fs::path out1 = scratch() / "solve1";
  const fs::path out2 = scratch() / "solve2";

  const Outcome a = run_tool("solve --config " + cfg.string() + " --out " + out1.string());
  REQUIRE(a.code == 0);
  const Outcome b = run_tool("solve --config " + cfg.string() + " --out " + out2.string());
  REQUIRE(b.code == 0);

  const std::string csv1 = slurp(out1 / "selftrap_profile.csv");
  REQUIRE(!csv1.empty());
  CHECK(csv1 == slurp(out2 / "selftrap_profile.csv"));
  CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));

  const Table t = parse_csv(out1 / "selftrap_profile.csv");
  CHECK(t.header == std::vector<std::string>{"q", "rho", "U", "U_cosh_approx", "R"});
  CHECK(t.rows.size() == 513);
}

TEST_CASE("solve without u0 exits with a config error") {
  const fs::path cfg = scratch() / "nou0.cfg";
  spit(cfg, "[grid]\nx_min = -1.2\nx_max = 1.2\nn = 257\n");
  const Outcome o = run_tool("solve --config " + cfg.string() + " --out " +
                             (scratch() / "nou0_out").string());
  CHECK(o.code == 2);
  CHECK(o.err.find("u0 required") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected by name") {
  const fs::path cfg = scratch() / "unknown.cfg";
  spit(cfg, base_config + "\n[selftrap]\nwibble = 3\n");
  const Outcome o = run_tool("solve --config " + cfg.string() + " --out " +
                             (scratch() / "unknown_out").string());
  CHECK(o.code == 2);
  CHECK(o.err.find("selftrap.wibble") != std::string::npos);
}

TEST_CASE("malformed numbers are rejected") {
  const fs::path cfg = scratch() / "badnum.cfg";
  spit(cfg, "[selftrap]\nu0 = banana\n");
  const Outcome o = run_tool("solve --config " + cfg.string() + " --out " +
                             (scratch() / "badnum_out").string());
  CHECK(o.code == 2);
}

TEST_CASE("missing required cli options exit with code 2") {
  const fs::path cfg = write_base_config();
  CHECK(run_tool("solve --config " + cfg.string()).code == 2);
  CHECK(run_tool("solve --out /tmp/x").code == 2);
  CHECK(run_tool("--help").code == 0);
}

TEST_CASE("overrides reach the solver") {
  const fs::path cfg = write_base_config();
  const fs::path out = scratch() / "override_out";
  const Outcome o = run_tool("solve --config " + cfg.string() +
                             " --set selftrap.u0=2 --set grid.n=257 --out " + out.string());
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(j.at("u0").get<double>() == 2.0);
  CHECK(j.at("grid").at("n").get<int>() == 257);

  const Outcome bad = run_tool("solve --config " + cfg.string() +
                               " --set grid.bogus=1 --out " + out.string());
  CHECK(bad.code == 2);
}

TEST_CASE("diagnose accepts fresh output and flags tampering") {
  const fs::path cfg = write_base_config();
  const fs::path out = scratch() / "diag_out";
  REQUIRE(run_tool("solve --config " + cfg.string() + " --out " + out.string()).code == 0);

  const Outcome good = run_tool("diagnose --out " + out.string());
  CHECK(good.code == 0);

  // double the density column; normalization and the exponential relation break
  std::ifstream in(out / "selftrap_profile.csv");
  std::string line;
  std::getline(in, line);
  std::string tampered = line + "\n";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string tok;
    std::vector<std::string> f;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", 2.0 * std::strtod(f[1].c_str(), nullptr));
    tampered += f[0] + "," + buf + "," + f[2] + "," + f[3] + "," + f[4] + "\n";
  }
  in.close();
  spit(out / "selftrap_profile.csv", tampered);

  const Outcome bad = run_tool("diagnose --out " + out.string());
  CHECK(bad.code == 1);

  const Outcome missing = run_tool("diagnose --out " + (scratch() / "no_such_dir").string());
  CHECK(missing.code == 2);
}

TEST_CASE("compare produces consistent densities") {
  // wide window so the matched gaussian carries no mass past the edges
  const fs::path cfg = scratch() / "compare.cfg";
  spit(cfg, R"([grid]
x_min = -10.0
x_max = 10.0
n = 2049
mode = bounded

[selftrap]
u0 = 1.0
)");
  const fs::path out = scratch() / "compare_out";
  REQUIRE(run_tool("compare --config " + cfg.string() + " --out " + out.string()).code == 0);

  const auto j = nlohmann::json::parse(slurp(out / "compare.json"));
  const double q_m = j.at("q_m").get<double>();
  const Table t = parse_csv(out / "compare.csv");
  CHECK(t.header == std::vector<std::string>{"q", "rho_selftrap", "rho_gaussian"});

  const double dx = t.rows[1][0] - t.rows[0][0];
  double m2_st = 0.0, m2_g = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double w = (i == 0 || i + 1 == t.rows.size()) ? 0.5 : 1.0;
    m2_st += w * t.rows[i][0] * t.rows[i][0] * t.rows[i][1];
    m2_g += w * t.rows[i][0] * t.rows[i][0] * t.rows[i][2];
    if (std::abs(t.rows[i][0]) >= q_m) CHECK(t.rows[i][1] == 0.0);
  }
  CHECK(std::abs(m2_st * dx - m2_g * dx) < 1e-6);
}

TEST_CASE("evolve writes a timeseries and a summary") {
  const fs::path cfg = scratch() / "evolve.cfg";
  spit(cfg, R"([grid]
x_min = -20.0
x_max = 20.0
n = 256
mode = periodic

[evolve]
source = gaussian
sigma = 1.0
dt = 0.001
t_end = 0.02
observer_stride = 5
)");
  const fs::path out1 = scratch() / "evolve1";
  const fs::path out2 = scratch() / "evolve2";
  REQUIRE(run_tool("evolve --config " + cfg.string() + " --out " + out1.string()).code == 0);
  REQUIRE(run_tool("evolve --config " + cfg.string() + " --out " + out2.string()).code == 0);
  CHECK(slurp(out1 / "timeseries.csv") == slurp(out2 / "timeseries.csv"));
  CHECK(slurp(out1 / "evolution.json") == slurp(out2 / "evolution.json"));

  const Table t = parse_csv(out1 / "timeseries.csv");
  CHECK(t.header == std::vector<std::string>{"t", "norm", "variance", "convexity_min", "theta_min"});
  const auto j = nlohmann::json::parse(slurp(out1 / "evolution.json"));
  CHECK(t.rows.size() == j.at("snapshots").get<std::size_t>());
  CHECK(j.at("T_convexity").get<double>() == 0.0);  // a free packet is nowhere convex

  const Outcome bounded = run_tool("evolve --config " + cfg.string() +
                                   " --set grid.mode=bounded --out " + out1.string());
  CHECK(bounded.code == 2);
}
