#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blockpos/core_linalg.hpp"

namespace blockpos::cli {

enum class Subcommand { Certify, Douglas, Axb, Parallel, Dilate, Gallery };

/// Exit statuses. These are the machine contract of the command line tool.
enum ExitCode : int {
  kPositive = 0,
  kNegative = 1,
  kMalformedInput = 2,
  kPrecondition = 3,
  kDisagreement = 4,
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Gallery;
  std::vector<std::string> input_paths;
  std::optional<Tolerances> tol_override;
  std::uint64_t seed = 0;
  int samples = 1000;
  std::string output;         // empty: standard output
  std::string route = "all";  // certify only
};

std::optional<Subcommand> parse_subcommand(const std::string& name);
std::string to_string(Subcommand s);

/// Executes one invocation, writing the JSON report to `out` (or to
/// config.output) and diagnostics to `err`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace blockpos::cli
