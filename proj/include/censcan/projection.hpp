#pragma once

#include <span>
#include <vector>

#include "censcan/types.hpp"

namespace censcan {

/// Default support budget: min(n, max(10, ceil(0.15 * n))).
int auto_sparsity(int node_count);

/// Connected support of size <= sparsity approximately maximizing the
/// captured squared mass of `gradient` (negative entries are floored at 0
/// before prizes are formed). Returns an empty set when no entry is
/// positive. Deterministic; ties break toward lower node ids.
std::vector<NodeId> head_projection(std::span<const double> gradient,
                                    const KeywordGraph& graph, int sparsity);

/// Connected support of size <= sparsity approximately minimizing the
/// distance between `b` and its restriction to the support. Zero-prize
/// connector nodes are kept only when needed for connectivity.
std::vector<NodeId> tail_projection(std::span<const double> b,
                                    const KeywordGraph& graph, int sparsity);

}  // namespace censcan
