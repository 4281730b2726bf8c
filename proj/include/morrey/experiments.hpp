#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "morrey/config.hpp"
#include "morrey/report.hpp"

namespace morrey {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

struct RunOptions {
  int threads = 0;            // resolved through resolve_threads
  bool inject_fault = false;  // selftest only: corrupts the semigroup multiplier
};

struct RunResult {
  std::vector<std::string> failures;  // invariant ids that failed
  std::vector<std::string> log;       // human-readable summary lines
  OutputSet outputs;

  int exit_code() const noexcept { return failures.empty() ? kExitOk : kExitInvariant; }
};

/// Every seminorm of the corpus; norms.json plus one CSV table per
/// (function, seminorm).
RunResult cmd_norms(const ExperimentConfig& cfg, const RunOptions& opt);

/// Per-function seminorm ratios at N and 2N with corpus bands and drift.
RunResult cmd_equivalence(const ExperimentConfig& cfg, const RunOptions& opt);

/// Normalization constant and reproduction battery.
RunResult cmd_reproduce(const ExperimentConfig& cfg, const RunOptions& opt);

/// Atom families, Hoelder bounds, atomic lower bounds and dual identities.
RunResult cmd_atoms(const ExperimentConfig& cfg, const RunOptions& opt);

/// Fixed battery of structural checks.
RunResult cmd_selftest(const ExperimentConfig& cfg, const RunOptions& opt);

inline constexpr std::string_view kCommands[] = {"norms", "equivalence", "reproduce", "atoms", "selftest"};

/// Runs a command, writes its outputs into out_dir and returns the exit code.
/// Configuration, parameter and span errors map to kExitConfig with no
/// files written.
int run_command(std::string_view command, const ExperimentConfig& cfg, const RunOptions& opt,
                const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace morrey
