#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace spinpulse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// A numerical error that aborts the whole command (exit 3).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  Table table;
  std::vector<std::string> warnings;
  int exit_code = kExitOk;
};

/// Guard-type errors (resonance, lambda range, branch trouble) become
/// row-level statuses; everything else aborts with NumericalFailure, except
/// InvalidArgument which surfaces as ConfigError.
CommandResult run_experiment(const ExperimentConfig& cfg);

/// spinpulse <command> --config <path> [--out <path>] [--format csv|jsonl]
///           [--rtol <x>] [--tol <x>]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinpulse::cli
