#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace glvortex {

enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_not_converged = 2 };

struct CommandOptions {
  std::string config_path;
  std::optional<double> epsilon;
  std::optional<std::string> out;  // exact run directory; default is a timestamped directory under output.dir
  bool trace = false;
  std::optional<std::uint64_t> seed;
};

int cmd_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_continue(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_alpha_beta(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_baseline(const CommandOptions& options, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string observed;
  std::string expected;
};

// Fast invariant checks: energy gradient against finite differences,
// projection idempotence, winding numbers, lambda1 against its closed form,
// kernel variants against the scalar reference and snapshot round trips.
std::vector<CheckResult> run_checks();
int cmd_check(std::ostream& out);

}  // namespace glvortex
