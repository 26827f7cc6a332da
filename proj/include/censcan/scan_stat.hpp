#pragma once

#include <span>
#include <vector>

#include "censcan/types.hpp"

namespace censcan {

/// Observed and expected totals over a (node set, window) region.
/// c_a/b_a refer to the reference source, c_b/b_b to the target source.
struct AggregateCounts {
  double c_a = 0.0;
  double c_b = 0.0;
  double b_a = 0.0;
  double b_b = 0.0;
};

/// Constrained rate MLEs: q_a_hat >= 1 (reference inflation),
/// q_b_hat in (0,1] (target deflation).
struct RateEstimates {
  double q_a_hat = 1.0;
  double q_b_hat = 1.0;
};

RateEstimates mle_rates(const AggregateCounts& counts);

/// Scan score from aggregates. Each source's divergence term enters only
/// when its rate estimate is strictly on the feasible side (inflated
/// reference, deflated target); 0*log(0) evaluates to 0. Always >= 0.
double glrt_from_counts(const AggregateCounts& counts);

/// Per-window aggregation problem: node-level window sums of both count
/// series plus baseline rates, against a fixed graph topology. Immutable
/// after construction and shareable across threads. Null replicas are
/// expressed as alternative WindowProblems over the same graph.
class WindowProblem {
 public:
  WindowProblem(const KeywordGraph& graph, TimeWindow window);

  /// Builds a problem with externally supplied per-node window sums
  /// (used by null-replica evaluation).
  WindowProblem(const KeywordGraph& graph, TimeWindow window,
                std::vector<double> window_sums_a,
                std::vector<double> window_sums_b);

  const KeywordGraph& graph() const { return *graph_; }
  const TimeWindow& window() const { return window_; }
  int window_len() const { return window_.length(); }
  int node_count() const { return static_cast<int>(sum_a_.size()); }

  const std::vector<double>& window_sums_a() const { return sum_a_; }
  const std::vector<double>& window_sums_b() const { return sum_b_; }
  const std::vector<double>& lambda_a() const { return lambda_a_; }
  const std::vector<double>& lambda_b() const { return lambda_b_; }

  AggregateCounts aggregate(std::span<const NodeId> nodes) const;
  double glrt(std::span<const NodeId> nodes) const;
  double singleton_glrt(NodeId v) const;

  /// Relaxed objective at x in [0,1]^n; identical to glrt on binary x.
  /// Throws std::invalid_argument when x has no positive entry.
  double relaxed_value(std::span<const double> x) const;

  /// Gradient of the relaxed objective; each source block is zeroed when
  /// its clamp zeroes the score term. `out` must have length n.
  void relaxed_gradient(std::span<const double> x, std::span<double> out) const;

  /// Objective/gradient over a support subset: x_local[i] belongs to
  /// omega[i]; entries outside omega are implicitly zero.
  double relaxed_value_on(std::span<const NodeId> omega,
                          std::span<const double> x_local) const;
  void relaxed_gradient_on(std::span<const NodeId> omega,
                           std::span<const double> x_local,
                           std::span<double> out_local) const;

  /// Epsilon added to logarithm arguments when an aggregate is zero.
  static constexpr double kLogGuard = 1e-12;

 private:
  const KeywordGraph* graph_;
  TimeWindow window_;
  std::vector<double> sum_a_;     // per node: sum of a_series over window
  std::vector<double> sum_b_;
  std::vector<double> lambda_a_;  // per node baseline rates
  std::vector<double> lambda_b_;
};

// Spec-level convenience wrappers; detector internals use WindowProblem.
AggregateCounts aggregate_counts(std::span<const NodeId> nodes,
                                 TimeWindow window, const KeywordGraph& graph);
double glrt_score(std::span<const NodeId> nodes, TimeWindow window,
                  const KeywordGraph& graph);
double relaxed_score(std::span<const double> x, TimeWindow window,
                     const KeywordGraph& graph);
std::vector<double> relaxed_gradient(std::span<const double> x,
                                     TimeWindow window,
                                     const KeywordGraph& graph);

}  // namespace censcan
