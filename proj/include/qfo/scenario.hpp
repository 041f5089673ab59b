#pragma once

#include "qfo/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace qfo {

/// Malformed or incomplete scenario file.
class ScenarioParseError : public Error {
public:
  using Error::Error;
};

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_parse = 2,
  exit_guard = 3,
  exit_io = 4,
};

struct RunOptions {
  std::filesystem::path out_dir = "qfo-out";
  std::optional<std::uint64_t> seed; // overrides the scenario's `seed`
  int threads = 0;                   // 0: hardware concurrency
  bool override_guards = false;
};

/// Parses and executes a scenario, writing field dumps, CSVs and
/// summary.json below `opt.out_dir`. Returns an ExitCode; diagnostics go to
/// `err`, progress to `log`.
int run_scenario(const std::filesystem::path& file, const RunOptions& opt, std::ostream& log, std::ostream& err);

/// Guards and certificates only; prints margins to `out`.
int verify_scenario(const std::filesystem::path& file, std::ostream& out, std::ostream& err);

/// A complete, commented lens bench scenario.
std::string default_scenario_yaml();

} // namespace qfo
