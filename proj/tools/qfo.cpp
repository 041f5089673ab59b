#include "qfo/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"qfo: quantum Fourier optics scenario runner"};
  app.require_subcommand(1);

  qfo::RunOptions opts;
  std::string run_file;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "execute a scenario and write its artifacts");
  run->add_option("file", run_file, "scenario file (YAML)")->required();
  run->add_option("--out", opts.out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--threads", opts.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  run->add_flag("--override-guards", opts.override_guards, "run even when validity guards fail");

  std::string verify_file;
  auto* verify = app.add_subcommand("verify", "check guards and certificates without propagating");
  verify->add_option("file", verify_file, "scenario file (YAML)")->required();

  auto* defaults = app.add_subcommand("dump-defaults", "print a default scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qfo::exit_parse;
  }

  if (*run) {
    if (*seed_opt) opts.seed = seed;
    return qfo::run_scenario(run_file, opts, std::cout, std::cerr);
  }
  if (*verify) return qfo::verify_scenario(verify_file, std::cout, std::cerr);
  if (*defaults) {
    std::cout << qfo::default_scenario_yaml();
    return 0;
  }
  return qfo::exit_parse;
}
