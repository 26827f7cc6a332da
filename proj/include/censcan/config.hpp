#pragma once

#include <cstdint>
#include <string>

#include "censcan/detector.hpp"
#include "censcan/graph_build.hpp"

namespace censcan {

/// Resolved run parameters, serialized into every output file for
/// provenance. Execution knobs (worker count) are excluded so outputs stay
/// byte-identical across parallelism settings.
struct RunConfig {
  double correlation_threshold = 0.15;
  double gamma = 10.0;
  bool prune_daily = false;
  int min_window = 3;
  int max_window = 7;
  double alpha = 0.05;
  int replicas = 199;
  int sparsity = 0;  // 0 = automatic budget
  std::uint64_t seed = 1;
  int workers = 1;   // not serialized
  std::string null_model = "poisson";  // or "permute"
  bool pool_replicas = true;
  int merge_gap_days = 5;
  double keyword_overlap_min = 0.2;
  double epsilon_obj = 1e-6;
  int max_iters = 10;
  double restart_prob = 0.1;

  DetectorConfig detector_config() const;
  GraphBuildOptions build_options() const;
  void validate() const;  // throws ConfigError
};

}  // namespace censcan
