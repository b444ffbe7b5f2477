#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"
#include "stlab/errors.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config) {
  auto* c = cmd->add_option("--config", args.config, "path to a config file");
  if (need_config) c->required();
  cmd->add_option("--set", args.overrides, "override a config value, section.key=value");
  cmd->add_option("--out", args.out, "output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-trapped wave packet laboratory"};
  app.require_subcommand(1);

  CommonArgs solve_args, evolve_args, compare_args, diagnose_args;
  CLI::App* solve = app.add_subcommand("solve", "construct a self-trapped profile");
  add_common(solve, solve_args, true);
  CLI::App* evolve = app.add_subcommand("evolve", "free-particle evolution with diagnostics");
  add_common(evolve, evolve_args, true);
  CLI::App* compare = app.add_subcommand("compare", "self-trapped profile against a matched gaussian");
  add_common(compare, compare_args, true);
  CLI::App* diagnose = app.add_subcommand("diagnose", "recheck invariants on solver output");
  diagnose->add_option("--out", diagnose_args.out, "directory holding solver output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*diagnose) return stlab::cli::cmd_diagnose(diagnose_args.out);
    const CommonArgs& args = *solve ? solve_args : (*evolve ? evolve_args : compare_args);
    const stlab::cli::RunConfig cfg = stlab::cli::load_config(args.config, args.overrides);
    if (*solve) return stlab::cli::cmd_solve(cfg, args.out);
    if (*evolve) return stlab::cli::cmd_evolve(cfg, args.out);
    return stlab::cli::cmd_compare(cfg, args.out);
  } catch (const stlab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
