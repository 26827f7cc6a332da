#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "censcan/detector.hpp"
#include "censcan/synthetic.hpp"
#include "censcan/types.hpp"

namespace censcan {

struct DetectionScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

/// Pre = |S∩S*|/|S| (0 for empty S), Rec = |S∩S*|/|S*|,
/// F = 2|S∩S*|/(|S|+|S*|). Ground truth must be non-empty.
DetectionScore score_detection(std::span<const NodeId> detected,
                               std::span<const NodeId> truth);

struct TrialResult {
  int trial = 0;
  DetectionScore score;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
};

struct BenchmarkCell {
  double q_t = 1.0;
  double fraction = 0.1;
  std::vector<TrialResult> trials;
  bool incomplete = false;  // timed out before all trials finished
  DetectionScore mean() const;
};

struct BenchmarkGrid {
  std::vector<double> q_t_values;
  std::vector<double> fractions;
  int trials_per_cell = 0;
  std::vector<BenchmarkCell> cells;  // q_t-major order
};

struct BenchmarkConfig {
  std::vector<double> q_t_values{1.0, 2.0, 10.0};
  std::vector<double> fractions{0.05, 0.10, 0.15};
  int trials = 10;
  int inject_window_len = 5;
  std::uint64_t seed = 1;
  int workers = 1;
  double cell_timeout_sec = 0.0;  // 0 = no limit
  DetectorConfig detector;        // replicas = 0 disables significance
};

/// Per cell and trial: inject into a base graph, sweep windows, pick the
/// highest-scoring significant candidate overlapping the injection window
/// (global best when none overlap), and score against the planted set.
BenchmarkGrid run_benchmark(
    const std::vector<std::shared_ptr<const KeywordGraph>>& base_graphs,
    const BenchmarkConfig& config);

void write_benchmark_csv(std::ostream& out, const BenchmarkGrid& grid);

}  // namespace censcan
