#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "inkforge/raster.hpp"

namespace inkforge::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

struct Config {
  int n = 224;
  int m = 224;
  double sample_period = 0.020;
  double simplify_epsilon = 1.0;
  AugmentationProbabilities probabilities;
  std::uint64_t seed = 0;
};

/// Applies a flat `key=value` config file on top of `base`. Keys: n, m,
/// period, epsilon, p_lines, p_grids, p_noise, p_blur, seed.
Config apply_config_text(Config base, const std::string& text);

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inkforge::cli
