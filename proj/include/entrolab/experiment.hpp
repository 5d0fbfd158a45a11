#pragma once

// Config-driven experiment runner behind the command line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "entrolab/io.hpp"

namespace entrolab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,  // verify found a broken invariant
  kExitValidation = 2,
  kExitNonConvergence = 3,
  kExitUncertified = 4,
};

struct RunOptions {
  std::filesystem::path out_dir;  // empty: write nothing
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool require_certified = false;
};

struct RunResult {
  int exit_code = kExitOk;
  bool certified = true;
  io::Json report;
  std::string message;
};

const std::vector<std::string>& task_names();

// Dispatches `task`, writes report.json (plus task CSV/SVG files) into
// out_dir, and maps errors to exit codes.
RunResult run(const std::string& task, const io::Json& config, const RunOptions& options);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Seeded property checks across all modules.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, unsigned threads = 1);

}  // namespace entrolab
