#pragma once

#include <vector>

#include "censcan/types.hpp"

namespace censcan {

/// Prize-collecting Steiner tree instance over an undirected graph.
/// Prizes are non-negative and finite; edge costs strictly positive.
struct PcstInstance {
  int node_count = 0;
  std::vector<double> prizes;
  std::vector<Edge> edges;  // Edge::weight carries the cost
};

/// A tree: node set plus the indices of instance edges connecting it.
struct PcstResult {
  std::vector<NodeId> nodes;     // sorted ascending
  std::vector<int> edge_ids;     // |nodes| - 1 entries
  double net_value = 0.0;        // sum of prizes minus sum of edge costs
  double prize_value = 0.0;      // sum of prizes over nodes
};

/// Unrooted prize-collecting Steiner tree via Goemans-Williamson moat
/// growth followed by strong pruning. Returns the best pruned subtree over
/// all final clusters; ties break toward the smallest node id. The input
/// graph must be connected.
PcstResult pcst_solve(const PcstInstance& instance);

}  // namespace censcan
