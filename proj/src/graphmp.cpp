#include "censcan/graphmp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "censcan/projection.hpp"
#include "censcan/rng.hpp"

namespace censcan {

namespace {

// One projected-ascent run over the box [0,1]^|omega| from x0 (local
// coordinates). Returns the best iterate and its objective.
std::pair<std::vector<double>, double> ascend(const WindowProblem& problem,
                                              const std::vector<NodeId>& omega,
                                              std::vector<double> x,
                                              const GraphMPConfig& config) {
  const std::size_t m = omega.size();
  std::vector<double> grad(m), trial(m);
  auto value_of = [&](const std::vector<double>& point) {
    bool any = false;
    for (double v : point) {
      if (v > 0.0) {
        any = true;
        break;
      }
    }
    if (!any) return 0.0;
    return problem.relaxed_value_on(omega, point);
  };

  double f = value_of(x);
  std::vector<double> best = x;
  double best_f = f;
  for (int it = 0; it < config.inner_max_iters; ++it) {
    problem.relaxed_gradient_on(omega, x, grad);
    double step = 1.0;
    bool accepted = false;
    double f_new = f;
    while (step >= 1e-12) {
      double dir_dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        trial[i] = std::clamp(x[i] + step * grad[i], 0.0, 1.0);
        dir_dot += grad[i] * (trial[i] - x[i]);
      }
      if (dir_dot > 0.0) {
        f_new = value_of(trial);
        if (f_new >= f + 1e-4 * dir_dot) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    x = trial;
    const double gain = f_new - f;
    f = f_new;
    if (f > best_f) {
      best = x;
      best_f = f;
    }
    if (gain < config.epsilon_obj) break;
  }
  return {std::move(best), best_f};
}

}  // namespace

std::vector<double> restricted_maximize(const WindowProblem& problem,
                                        const std::vector<NodeId>& omega,
                                        std::span<const double> x_start,
                                        const GraphMPConfig& config) {
  if (omega.empty()) {
    throw std::invalid_argument("restricted_maximize: omega must be non-empty");
  }
  const std::size_t m = omega.size();
  std::vector<double> warm(m);
  for (std::size_t i = 0; i < m; ++i) warm[i] = x_start[omega[i]];

  double warm_value = 0.0;
  if (std::any_of(warm.begin(), warm.end(), [](double v) { return v > 0.0; })) {
    warm_value = problem.relaxed_value_on(omega, warm);
  }

  // The objective is 1-homogeneous and non-concave, so a single ascent can
  // stall in a poor cone. Run a small deterministic set of starts: the warm
  // point, the full indicator, seeded random points, and (on small supports)
  // each singleton. The warm start wins ties.
  std::vector<double> best = warm;
  double best_value = warm_value;
  auto try_start = [&](std::vector<double> start) {
    auto [x, f] = ascend(problem, omega, std::move(start), config);
    if (f > best_value) {
      best = std::move(x);
      best_value = f;
    }
  };
  try_start(warm);
  try_start(std::vector<double>(m, 1.0));
  RngStream rng(0x7e57 + static_cast<std::uint64_t>(m));
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<double> random(m);
    for (double& v : random) v = rng.uniform(0.05, 1.0);
    try_start(std::move(random));
  }
  if (m <= 10) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> single(m, 0.0);
      single[i] = 1.0;
      try_start(std::move(single));
    }
  }

  std::vector<double> full(problem.node_count(), 0.0);
  for (std::size_t i = 0; i < m; ++i) full[omega[i]] = best[i];
  return full;
}

GraphMPResult relaxed_graphmp(const WindowProblem& problem,
                              const GraphMPConfig& config) {
  const int n = problem.node_count();
  if (n == 0) {
    throw std::invalid_argument("relaxed_graphmp: empty graph");
  }
  const KeywordGraph& graph = problem.graph();
  const int sparsity =
      config.sparsity > 0 ? std::min(config.sparsity, n) : auto_sparsity(n);

  // Initial point: indicator of the best-scoring single node.
  NodeId seed_node = 0;
  double seed_score = -1.0;
  for (NodeId v = 0; v < n; ++v) {
    const double s = problem.singleton_glrt(v);
    if (s > seed_score) {
      seed_score = s;
      seed_node = v;
    }
  }
  std::vector<double> x(n, 0.0);
  x[seed_node] = 1.0;

  GraphMPResult best;
  best.nodes = {seed_node};
  best.score = seed_score;
  best.rates = mle_rates(problem.aggregate(best.nodes));

  std::vector<double> grad(n);
  double prev_score = seed_score;
  int iterations = 0;
  for (int it = 0; it < config.max_iters; ++it) {
    ++iterations;
    problem.relaxed_gradient(x, grad);
    std::vector<NodeId> head = head_projection(grad, graph, sparsity);
    if (head.empty()) {
      // Degenerate gradient; fall back to its single largest entry.
      NodeId top = 0;
      for (NodeId v = 1; v < n; ++v) {
        if (grad[v] > grad[top]) top = v;
      }
      head = {top};
    }
    std::vector<NodeId> omega = head;
    for (NodeId v = 0; v < n; ++v) {
      if (x[v] > 0.0) omega.push_back(v);
    }
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());

    const std::vector<double> b =
        restricted_maximize(problem, omega, x, config);
    std::vector<NodeId> support = tail_projection(b, graph, sparsity);
    if (support.empty()) break;

    std::fill(x.begin(), x.end(), 0.0);
    for (NodeId v : support) x[v] = b[v];

    const double score = problem.glrt(support);
    if (score > best.score) {
      best.score = score;
      best.nodes = support;
      best.rates = mle_rates(problem.aggregate(support));
    }
    if (std::abs(score - prev_score) < config.epsilon_obj) {
      prev_score = score;
      break;
    }
    prev_score = score;
  }
  best.iterations = iterations;
  return best;
}

GraphMPResult relaxed_graphmp(const KeywordGraph& graph, TimeWindow window,
                              const GraphMPConfig& config) {
  WindowProblem problem(graph, window);
  return relaxed_graphmp(problem, config);
}

}  // namespace censcan
