#pragma once

#include <optional>
#include <string>
#include <vector>

#include "censcan/types.hpp"

namespace censcan {

/// Per-keyword daily count matrices for a (reference, target) source pair,
/// plus the shared daily co-occurrence graphs. Vocabulary is sorted, so node
/// ids are stable across runs.
struct CorpusCounts {
  std::vector<std::string> vocabulary;          // sorted
  std::vector<std::vector<double>> a_counts;    // [node][day 0-based]
  std::vector<std::vector<double>> b_counts;
  std::vector<DailyGraph> daily_graphs;         // one per day with documents
  int days = 0;
};

/// Builds daily co-occurrence graphs and per-source count series. Documents
/// whose source matches `reference_source` feed the a-series; those matching
/// `target_source` feed the b-series; other sources are ignored. Edge weights
/// count documents from either of the two sources.
/// Throws InputError when a document's day falls outside {1,...,T}.
CorpusCounts build_daily_graphs(const std::vector<Document>& docs, int days,
                                const std::string& reference_source,
                                const std::string& target_source);

struct CorrelationDecision {
  bool keep = false;
  double r = 0.0;
  bool degenerate = false;  // zero-variance series, r undefined
};

/// Pearson correlation keep/drop decision. Series that are entirely zero in
/// either source are dropped upstream; zero-variance series are dropped here
/// with the degenerate flag set.
CorrelationDecision correlation_filter(const std::vector<double>& series_a,
                                       const std::vector<double>& series_b,
                                       double threshold);

/// Two-array quantile normalization: each rank's value in both series is
/// replaced by the mean of the two sorted values at that rank; ties receive
/// the mean over their rank range. Preserves each series' rank order.
void quantile_normalize(std::vector<double>& series_a,
                        std::vector<double>& series_b);

/// Removes edges with weight < gamma. Isolated nodes drop out implicitly
/// because graphs carry nodes via their edges downstream.
std::vector<Edge> prune_edges(const std::vector<Edge>& edges, double gamma);

/// Baseline rate estimation method. The window variant averages the days
/// outside the given window (falling back to the full mean when the window
/// covers the whole period).
struct BaselineMethod {
  enum class Kind { kFullMean, kMeanExcludingWindow } kind = Kind::kFullMean;
  TimeWindow excluded{1, 1};
};

/// Returns the estimated rate, or nullopt when the series mean is zero
/// (such nodes must be excluded, never given lambda = 0).
std::optional<double> estimate_baseline(const std::vector<double>& series,
                                        const BaselineMethod& method = {});

/// Options controlling document-stream graph construction.
struct GraphBuildOptions {
  double correlation_threshold = 0.15;
  double gamma = 10.0;
  bool prune_daily = false;  // prune per-day weights instead of union weights
  BaselineMethod baseline{};
};

/// Unions daily graphs over `window`, restricted to `kept_nodes` (pass all
/// ids to skip filtering), prunes by gamma, and keeps the maximal connected
/// component (ties broken toward the component containing the smallest
/// keyword). Signals must cover the full study period. Returns nullopt when
/// no edges survive.
std::optional<KeywordGraph> window_union(
    const std::vector<DailyGraph>& daily, TimeWindow window,
    const std::vector<std::string>& vocabulary,
    const std::vector<NodeSignals>& signals,
    const std::vector<char>& node_kept, double gamma, int days);

/// Full preprocessing pipeline: count series -> correlation filter ->
/// quantile normalization -> baselines -> pruned maximal-component union
/// over the whole study period. Returns nullopt when nothing survives.
struct PreparedCorpus {
  CorpusCounts counts;
  std::vector<NodeSignals> signals;     // indexed like counts.vocabulary
  std::vector<char> node_kept;          // correlation + baseline survivors
};
PreparedCorpus prepare_corpus(const std::vector<Document>& docs, int days,
                              const std::string& reference_source,
                              const std::string& target_source,
                              const GraphBuildOptions& options);

std::optional<KeywordGraph> build_study_graph(const PreparedCorpus& corpus,
                                              const GraphBuildOptions& options);

}  // namespace censcan
