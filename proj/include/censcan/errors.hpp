#pragma once

#include <stdexcept>
#include <string>

namespace censcan {

/// Malformed or out-of-contract input data (documents, graph files, reports).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (bad thresholds, window ranges, grids).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace censcan
