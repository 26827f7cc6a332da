#pragma once

#include <span>
#include <vector>

#include "censcan/scan_stat.hpp"
#include "censcan/types.hpp"

namespace censcan {

struct GraphMPConfig {
  int max_iters = 10;
  double epsilon_obj = 1e-6;   // objective-improvement halting threshold
  int sparsity = 0;            // 0 -> auto_sparsity(n)
  int inner_max_iters = 1000;  // cap for the restricted ascent
};

struct GraphMPResult {
  std::vector<NodeId> nodes;  // connected support, sorted
  double score = 0.0;         // discrete scan score of `nodes`
  RateEstimates rates;
  int iterations = 0;
};

/// Box-constrained ascent of the relaxed objective restricted to supp(x)
/// within `omega` (backtracking line search halving from step 1.0; stops on
/// improvement < epsilon_obj or the iteration cap). Returns a full-length
/// vector with support inside omega; a non-improving start comes back
/// unchanged.
std::vector<double> restricted_maximize(const WindowProblem& problem,
                                        const std::vector<NodeId>& omega,
                                        std::span<const double> x_start,
                                        const GraphMPConfig& config);

/// Iterated gradient / head projection / restricted maximization / tail
/// projection over one window. Tracks the best discrete score seen across
/// iterations and reports that support.
GraphMPResult relaxed_graphmp(const WindowProblem& problem,
                              const GraphMPConfig& config);

GraphMPResult relaxed_graphmp(const KeywordGraph& graph, TimeWindow window,
                              const GraphMPConfig& config);

}  // namespace censcan
