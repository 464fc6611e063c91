#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace knotforge::cli {

/// Shared run settings; every subcommand seeds all randomness from `seed`.
struct RunConfig {
  std::uint64_t seed = 42;
  int n_samples = 1000;
  int grid = 4096;
  double eps_level = 1e-12;    // level-edge tolerance (relative)
  double theta_min = 1e-4;     // crossing transversality floor (radians)
  double dedup_angle = 1e-6;   // secant dedup, angular
  double dedup_moment = 1e-6;  // secant dedup, moment (relative)
  std::string output_dir;
  std::string format = "json";
};

/// Exit codes: 0 success, 1 domain error (module error names reported
/// verbatim), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace knotforge::cli
