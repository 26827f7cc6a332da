#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace censcan {

using NodeId = std::int32_t;

/// One tokenized document from a single stream. `day` is 1-based within the
/// study period {1,...,T}; tokens are deduplicated by the parser.
struct Document {
  std::string source;
  int day = 0;
  std::vector<std::string> tokens;
};

/// Continuous day range {start,...,end}, 1-based, both ends inclusive.
struct TimeWindow {
  int start = 1;
  int end = 1;

  int length() const { return end - start + 1; }
  bool contains(int day) const { return day >= start && day <= end; }
  bool overlaps(const TimeWindow& o) const {
    return start <= o.end && o.start <= end;
  }
  bool operator==(const TimeWindow& o) const = default;

  /// Day gap between two windows: 0 when they overlap, otherwise the
  /// difference between the later start and the earlier end.
  static int gap(const TimeWindow& x, const TimeWindow& y) {
    if (x.overlaps(y)) return 0;
    return x.end < y.start ? y.start - x.end : x.start - y.end;
  }
};

/// Per-keyword daily count series and baseline rates for both sources.
/// Counts are reals: quantile normalization produces non-integers.
struct NodeSignals {
  std::vector<double> a_series;  // reference source, length T
  std::vector<double> b_series;  // target source, length T
  double lambda_a = 0.0;
  double lambda_b = 0.0;
};

/// Undirected weighted edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 0.0;
};

/// Keyword co-occurrence graph for one day. Nodes and edges use ids from the
/// corpus vocabulary; edge weights count documents containing both endpoints.
struct DailyGraph {
  int day = 0;
  std::vector<NodeId> nodes;                       // sorted, unique
  std::map<std::pair<NodeId, NodeId>, double> edges;  // key has first < second
};

/// Connected keyword graph over a day range, with complete per-node signals
/// for the full study period. Immutable after construction; safe to share
/// read-only across worker threads.
struct KeywordGraph {
  std::vector<std::string> keywords;   // node id -> keyword, ids contiguous
  std::vector<NodeSignals> signals;    // one entry per node
  std::vector<Edge> edges;             // u < v, no self-loops
  TimeWindow window_span;              // day range whose dailies were unioned
  int days = 0;                        // study period length T

  // CSR adjacency, filled by build_adjacency().
  std::vector<std::int32_t> adj_offsets;
  std::vector<NodeId> adj_neighbors;

  int node_count() const { return static_cast<int>(keywords.size()); }
  NodeId index_of(const std::string& kw) const;  // -1 when absent

  void build_adjacency();
  bool has_adjacency() const { return !adj_offsets.empty(); }
  bool is_connected() const;

  /// Throws InputError if series lengths, edge endpoints, or rates violate
  /// the graph invariants.
  void validate() const;
};

}  // namespace censcan
