#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "censcan/types.hpp"

namespace censcan {

/// Planted-anomaly parameters. Under the paired protocol q_t * q_n = 1:
/// q_t inflates reference-source rates, q_n deflates target-source rates.
struct InjectionSpec {
  double fraction = 0.1;      // planted nodes as a fraction of n
  double q_t = 2.0;
  double q_n = 0.5;
  double restart_prob = 0.1;
  TimeWindow window{1, 1};
  std::uint64_t seed = 1;
  bool paper_protocol = true;  // enforce q_t * q_n == 1
};

struct InjectionGroundTruth {
  std::vector<NodeId> nodes;  // planted connected set, sorted
  TimeWindow window;
  InjectionSpec spec;
};

/// Connected node set sampled by a random walk with restart: step to a
/// uniform neighbor, or jump back to the origin with probability
/// restart_prob; distinct visited nodes accumulate until `size` reached.
std::vector<NodeId> random_walk_subgraph(const KeywordGraph& graph, int size,
                                         double restart_prob,
                                         std::uint64_t seed);

/// Redraws the planted cells: a^t(v) ~ Poisson(q_t * lambda_a(v)) and
/// b^t(v) ~ Poisson(q_n * lambda_b(v)) for v in the planted set and t in the
/// window. All other cells and all baselines stay untouched. RNG streams
/// split per (node, day, source), so the result is independent of traversal
/// order. Throws ConfigError on invalid spec.
std::pair<KeywordGraph, InjectionGroundTruth> inject_anomaly(
    const KeywordGraph& graph, const InjectionSpec& spec);

/// Every cell of both series redrawn independently at its baseline rate.
KeywordGraph sample_null(const KeywordGraph& graph, std::uint64_t seed);

/// Synthetic connected base graph for benchmarks: random spanning tree plus
/// extra random edges, baseline rates drawn uniformly, series drawn under
/// the null.
struct SyntheticGraphConfig {
  int node_count = 300;
  double avg_degree = 6.0;
  int days = 14;
  double lambda_a_min = 5.0, lambda_a_max = 30.0;
  double lambda_b_min = 5.0, lambda_b_max = 30.0;
  double edge_weight = 10.0;
  std::uint64_t seed = 1;
};
KeywordGraph make_synthetic_graph(const SyntheticGraphConfig& config);

}  // namespace censcan
