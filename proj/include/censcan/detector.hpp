#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "censcan/graph_build.hpp"
#include "censcan/graphmp.hpp"
#include "censcan/types.hpp"

namespace censcan {

/// A scored (node set, window) pair for one target outlet.
struct CandidateCluster {
  std::vector<NodeId> nodes;           // connected, sorted
  std::vector<std::string> keywords;   // filled at report assembly
  TimeWindow window;
  double score = 0.0;
  RateEstimates rates;
  double p_value = 1.0;
  std::string outlet;
};

struct DetectionReport {
  std::string outlet;
  std::vector<CandidateCluster> indicators;  // significant, merged, by p asc
};

enum class NullModel {
  kPoisson,      // redraw counts at baseline rates (tests H0 directly)
  kPermutation,  // score randomly sampled connected clusters
};

struct DetectorConfig {
  int min_window = 3;
  int max_window = 7;
  double alpha = 0.05;
  int replicas = 199;
  std::uint64_t seed = 1;
  int workers = 1;
  NullModel null_model = NullModel::kPoisson;
  bool pool_replicas = true;  // one replica pool per window length
  int merge_gap_days = 5;
  double keyword_overlap_min = 0.2;
  GraphMPConfig optimizer;
};

/// Supplies the keyword graph for each candidate window. The fixed source
/// reuses one topology for every window (the graph-file pipeline); the
/// daily source unions per-day graphs (the document pipeline).
class WindowSource {
 public:
  virtual ~WindowSource() = default;
  virtual int days() const = 0;
  virtual std::shared_ptr<const KeywordGraph> window_graph(
      TimeWindow window) const = 0;
};

class FixedWindowSource : public WindowSource {
 public:
  explicit FixedWindowSource(std::shared_ptr<const KeywordGraph> graph)
      : graph_(std::move(graph)) {}
  int days() const override { return graph_->days; }
  std::shared_ptr<const KeywordGraph> window_graph(TimeWindow) const override {
    return graph_;
  }

 private:
  std::shared_ptr<const KeywordGraph> graph_;
};

class DailyWindowSource : public WindowSource {
 public:
  DailyWindowSource(std::shared_ptr<const PreparedCorpus> corpus,
                    GraphBuildOptions options)
      : corpus_(std::move(corpus)), options_(options) {}
  int days() const override { return corpus_->counts.days; }
  std::shared_ptr<const KeywordGraph> window_graph(
      TimeWindow window) const override;

 private:
  std::shared_ptr<const PreparedCorpus> corpus_;
  GraphBuildOptions options_;
};

/// Runs the optimizer on every window with length in [min_window,
/// max_window]; windows with empty graphs are skipped. Candidates carry no
/// p-values yet. Deterministic regardless of worker count.
std::vector<CandidateCluster> sweep_windows(const WindowSource& source,
                                            const DetectorConfig& config,
                                            const std::string& outlet = "");

/// Empirical p-value for one candidate: M null replicas re-optimized over
/// the candidate's window; p = (1 + #{replica >= observed}) / (1 + M).
double randomization_pvalue(const CandidateCluster& candidate,
                            const WindowSource& source,
                            const DetectorConfig& config);

/// Fills p-values for a whole sweep, sharing one replica pool per window
/// length when config.pool_replicas is set.
void compute_pvalues(std::vector<CandidateCluster>& candidates,
                     const WindowSource& source, const DetectorConfig& config);

/// Subset with p <= alpha, order preserved (boundary inclusive).
std::vector<CandidateCluster> filter_significant(
    const std::vector<CandidateCluster>& candidates, double alpha);

/// Ranks by p-value (ties: earlier start, then lower score) and keeps a
/// candidate only when its window is more than gap_days from every kept
/// window; overlapping windows have distance 0.
std::vector<CandidateCluster> merge_overlapping(
    const std::vector<CandidateCluster>& candidates, int gap_days = 5);

/// Full single-outlet pipeline: sweep, p-values, significance filter, merge.
DetectionReport detect(const WindowSource& source,
                       const DetectorConfig& config,
                       const std::string& outlet);

/// Cross-outlet indicator group: similar indicators (overlapping windows,
/// keyword Jaccard >= threshold) bundled across outlets.
struct IndicatorGroup {
  std::vector<CandidateCluster> members;
  std::vector<std::string> outlets;  // distinct, sorted
};

struct CrossOutletResult {
  std::vector<IndicatorGroup> groups;  // survivors
  int discarded_all_outlets = 0;
  bool single_outlet_passthrough = false;
};

/// Groups similar indicators across outlets and discards any group present
/// in every analyzed outlet (attributed to topic difference rather than
/// suppression). With require_counterexample, a group survives only when at
/// least one analyzed outlet lacks it (equivalent under this grouping).
CrossOutletResult cross_outlet_filter(
    const std::vector<DetectionReport>& reports, double keyword_overlap_min,
    bool require_counterexample);

}  // namespace censcan
