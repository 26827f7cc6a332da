#include "censcan/config.hpp"

#include "censcan/errors.hpp"

namespace censcan {

DetectorConfig RunConfig::detector_config() const {
  DetectorConfig d;
  d.min_window = min_window;
  d.max_window = max_window;
  d.alpha = alpha;
  d.replicas = replicas;
  d.seed = seed;
  d.workers = workers;
  d.null_model =
      null_model == "permute" ? NullModel::kPermutation : NullModel::kPoisson;
  d.pool_replicas = pool_replicas;
  d.merge_gap_days = merge_gap_days;
  d.keyword_overlap_min = keyword_overlap_min;
  d.optimizer.max_iters = max_iters;
  d.optimizer.epsilon_obj = epsilon_obj;
  d.optimizer.sparsity = sparsity;
  return d;
}

GraphBuildOptions RunConfig::build_options() const {
  GraphBuildOptions o;
  o.correlation_threshold = correlation_threshold;
  o.gamma = gamma;
  o.prune_daily = prune_daily;
  return o;
}

void RunConfig::validate() const {
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (min_window < 1 || min_window > max_window) {
    throw ConfigError("window lengths must satisfy 1 <= min <= max");
  }
  if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("alpha must lie in (0,1)");
  if (replicas != 0 && replicas < 19) {
    throw ConfigError("replicas must be 0 (disabled) or >= 19");
  }
  if (sparsity < 0) throw ConfigError("sparsity must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (null_model != "poisson" && null_model != "permute") {
    throw ConfigError("null-model must be 'poisson' or 'permute'");
  }
  if (merge_gap_days < 0) throw ConfigError("merge-gap-days must be >= 0");
  if (keyword_overlap_min < 0.0 || keyword_overlap_min > 1.0) {
    throw ConfigError("keyword-overlap-min must lie in [0,1]");
  }
  if (epsilon_obj <= 0.0) throw ConfigError("epsilon-obj must be > 0");
  if (max_iters < 1) throw ConfigError("max-iters must be >= 1");
  if (restart_prob < 0.0 || restart_prob >= 1.0) {
    throw ConfigError("restart-prob must lie in [0,1)");
  }
}

}  // namespace censcan
