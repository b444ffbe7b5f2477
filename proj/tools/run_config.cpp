#include "run_config.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "stlab/errors.hpp"

namespace stlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": invalid number '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": invalid integer '" + s + "'");
  }
}

void set_formats(RunConfig& cfg, const std::string& raw, const std::string& key) {
  cfg.emit_csv = false;
  cfg.emit_json = false;
  std::stringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok == "csv")
      cfg.emit_csv = true;
    else if (tok == "json")
      cfg.emit_json = true;
    else
      throw ConfigError(key + ": unknown format '" + tok + "'");
  }
  if (!cfg.emit_csv && !cfg.emit_json)
    throw ConfigError(key + ": at least one of csv, json required");
}

void set_value(RunConfig& cfg, const std::string& sec, const std::string& key,
               const std::string& raw_in) {
  const std::string full = sec.empty() ? key : sec + "." + key;
  const std::string raw = unquote(raw_in);
  if (sec == "params") {
    if (key == "hbar") cfg.params.hbar = parse_double(raw, full);
    else if (key == "m") cfg.params.m = parse_double(raw, full);
    else if (key == "beta") cfg.params.beta = parse_double(raw, full);
    else throw ConfigError("unknown config key: " + full);
  } else if (sec == "grid") {
    if (key == "x_min") cfg.x_min = parse_double(raw, full);
    else if (key == "x_max") cfg.x_max = parse_double(raw, full);
    else if (key == "n") {
      const long long v = parse_int(raw, full);
      if (v < 1) throw ConfigError(full + ": must be positive");
      cfg.n = static_cast<std::size_t>(v);
    } else if (key == "mode") {
      if (raw == "bounded") cfg.mode = GridMode::bounded;
      else if (raw == "periodic") cfg.mode = GridMode::periodic;
      else throw ConfigError(full + ": must be bounded or periodic");
    } else throw ConfigError("unknown config key: " + full);
  } else if (sec == "selftrap") {
    if (key == "u0") cfg.u0 = parse_double(raw, full);
    else if (key == "rtol") cfg.solve.rtol = parse_double(raw, full);
    else if (key == "atol") cfg.solve.atol = parse_double(raw, full);
    else if (key == "rho_floor") cfg.solve.rho_floor = parse_double(raw, full);
    else if (key == "x_limit") cfg.solve.x_limit = parse_double(raw, full);
    else if (key == "h_max") cfg.solve.h_max = parse_double(raw, full);
    else throw ConfigError("unknown config key: " + full);
  } else if (sec == "evolve") {
    if (key == "source") {
      if (raw != "selftrap" && raw != "gaussian")
        throw ConfigError(full + ": must be selftrap or gaussian");
      cfg.source = raw;
    } else if (key == "sigma") cfg.sigma = parse_double(raw, full);
    else if (key == "dt") cfg.dt = parse_double(raw, full);
    else if (key == "t_end") cfg.t_end = parse_double(raw, full);
    else if (key == "observer_stride") {
      const long long v = parse_int(raw, full);
      if (v < 1) throw ConfigError(full + ": must be >= 1");
      cfg.observer_stride = static_cast<int>(v);
    } else if (key == "phase") {
      if (raw != "zero" && raw != "quadratic")
        throw ConfigError(full + ": must be zero or quadratic");
      cfg.phase = raw;
    } else if (key == "theta0") cfg.theta0 = parse_double(raw, full);
    else if (key == "eps_mask_u") cfg.madelung.eps_mask_u = parse_double(raw, full);
    else if (key == "eps_mask_v") cfg.madelung.eps_mask_v = parse_double(raw, full);
    else if (key == "fd_accuracy") {
      const long long v = parse_int(raw, full);
      if (v != 2 && v != 4) throw ConfigError(full + ": must be 2 or 4");
      cfg.madelung.fd_accuracy = static_cast<int>(v);
    } else if (key == "theta_blowup_threshold")
      cfg.theta_blowup_threshold = parse_double(raw, full);
    else if (key == "boundary_leak_tol") cfg.boundary_leak_tol = parse_double(raw, full);
    else throw ConfigError("unknown config key: " + full);
  } else if (sec == "output") {
    if (key == "formats") set_formats(cfg, raw, full);
    else throw ConfigError("unknown config key: " + full);
  } else {
    throw ConfigError("unknown config section: " + (sec.empty() ? key : sec));
  }
}

}  // namespace

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
      set_value(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
  for (const std::string& o : overrides) apply_override(cfg, o);
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: " + assignment);
  const std::string lhs = trim(assignment.substr(0, eq));
  const std::string rhs = trim(assignment.substr(eq + 1));
  const auto dot = lhs.find('.');
  if (dot == std::string::npos)
    throw ConfigError("override must look like section.key=value: " + assignment);
  set_value(cfg, lhs.substr(0, dot), lhs.substr(dot + 1), rhs);
}

}  // namespace stlab::cli
