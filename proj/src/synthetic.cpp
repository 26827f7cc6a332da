#include "censcan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "censcan/errors.hpp"
#include "censcan/rng.hpp"

namespace censcan {

std::vector<NodeId> random_walk_subgraph(const KeywordGraph& graph, int size,
                                         double restart_prob,
                                         std::uint64_t seed) {
  const int n = graph.node_count();
  if (size < 1 || size > n) {
    throw std::invalid_argument("random_walk_subgraph: size out of range");
  }
  if (!graph.has_adjacency()) {
    throw std::invalid_argument("random_walk_subgraph: adjacency not built");
  }
  RngStream rng = derive_stream(seed, {kStreamWalk});
  const NodeId origin = static_cast<NodeId>(rng.uniform_below(n));
  std::set<NodeId> visited{origin};
  NodeId current = origin;
  while (static_cast<int>(visited.size()) < size) {
    if (rng.uniform01() < restart_prob) {
      current = origin;
      continue;
    }
    const std::int32_t begin = graph.adj_offsets[current];
    const std::int32_t end = graph.adj_offsets[current + 1];
    if (begin == end) {
      current = origin;  // isolated node; only possible when n == 1
      continue;
    }
    current = graph.adj_neighbors[begin + rng.uniform_below(end - begin)];
    visited.insert(current);
  }
  return {visited.begin(), visited.end()};
}

std::pair<KeywordGraph, InjectionGroundTruth> inject_anomaly(
    const KeywordGraph& graph, const InjectionSpec& spec) {
  if (spec.fraction <= 0.0 || spec.fraction >= 1.0) {
    throw ConfigError("inject_anomaly: fraction must lie in (0,1)");
  }
  if (spec.q_t < 1.0) {
    throw ConfigError("inject_anomaly: q_t must be >= 1");
  }
  if (spec.paper_protocol && std::abs(spec.q_t * spec.q_n - 1.0) > 1e-9) {
    throw ConfigError("inject_anomaly: protocol requires q_t * q_n == 1");
  }
  if (spec.window.start < 1 || spec.window.end > graph.days) {
    throw ConfigError("inject_anomaly: window outside study period");
  }
  const int n = graph.node_count();
  const int planted = static_cast<int>(std::ceil(spec.fraction * n));

  InjectionGroundTruth truth;
  truth.nodes =
      random_walk_subgraph(graph, planted, spec.restart_prob, spec.seed);
  truth.window = spec.window;
  truth.spec = spec;

  KeywordGraph out = graph;
  for (NodeId v : truth.nodes) {
    NodeSignals& s = out.signals[v];
    for (int day = spec.window.start; day <= spec.window.end; ++day) {
      RngStream ra = derive_stream(
          spec.seed, {kStreamInject, static_cast<std::uint64_t>(v),
                      static_cast<std::uint64_t>(day), kSourceRef});
      RngStream rb = derive_stream(
          spec.seed, {kStreamInject, static_cast<std::uint64_t>(v),
                      static_cast<std::uint64_t>(day), kSourceTarget});
      s.a_series[day - 1] =
          static_cast<double>(poisson_sample(spec.q_t * s.lambda_a, ra));
      s.b_series[day - 1] =
          static_cast<double>(poisson_sample(spec.q_n * s.lambda_b, rb));
    }
  }
  return {std::move(out), std::move(truth)};
}

KeywordGraph sample_null(const KeywordGraph& graph, std::uint64_t seed) {
  KeywordGraph out = graph;
  const int n = graph.node_count();
  for (NodeId v = 0; v < n; ++v) {
    NodeSignals& s = out.signals[v];
    for (int day = 1; day <= graph.days; ++day) {
      RngStream ra =
          derive_stream(seed, {kStreamNull, static_cast<std::uint64_t>(v),
                               static_cast<std::uint64_t>(day), kSourceRef});
      RngStream rb =
          derive_stream(seed, {kStreamNull, static_cast<std::uint64_t>(v),
                               static_cast<std::uint64_t>(day), kSourceTarget});
      s.a_series[day - 1] = static_cast<double>(poisson_sample(s.lambda_a, ra));
      s.b_series[day - 1] = static_cast<double>(poisson_sample(s.lambda_b, rb));
    }
  }
  return out;
}

KeywordGraph make_synthetic_graph(const SyntheticGraphConfig& config) {
  const int n = config.node_count;
  if (n < 1) throw ConfigError("make_synthetic_graph: need at least one node");
  RngStream rng = derive_stream(config.seed, {kStreamGraphGen});

  KeywordGraph g;
  g.days = config.days;
  g.window_span = {1, config.days};
  g.keywords.reserve(n);
  char name[24];
  for (int v = 0; v < n; ++v) {
    std::snprintf(name, sizeof(name), "kw%06d", v);
    g.keywords.emplace_back(name);
  }

  // Random spanning tree (attach each node to a uniform earlier node), then
  // extra edges up to the target degree.
  std::set<std::pair<NodeId, NodeId>> edge_set;
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = static_cast<NodeId>(rng.uniform_below(v));
    edge_set.insert({std::min(u, v), std::max(u, v)});
  }
  const long target_edges =
      std::max<long>(n - 1, static_cast<long>(config.avg_degree * n / 2.0));
  long attempts = 0;
  while (static_cast<long>(edge_set.size()) < target_edges &&
         attempts < 20 * target_edges) {
    ++attempts;
    const NodeId u = static_cast<NodeId>(rng.uniform_below(n));
    const NodeId v = static_cast<NodeId>(rng.uniform_below(n));
    if (u == v) continue;
    edge_set.insert({std::min(u, v), std::max(u, v)});
  }
  g.edges.reserve(edge_set.size());
  for (const auto& [u, v] : edge_set) {
    g.edges.push_back({u, v, config.edge_weight});
  }

  g.signals.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    NodeSignals& s = g.signals[v];
    s.lambda_a = rng.uniform(config.lambda_a_min, config.lambda_a_max);
    s.lambda_b = rng.uniform(config.lambda_b_min, config.lambda_b_max);
    s.a_series.resize(config.days);
    s.b_series.resize(config.days);
  }
  g.build_adjacency();
  KeywordGraph drawn = sample_null(g, config.seed ^ 0x5eedba5eULL);
  return drawn;
}

}  // namespace censcan
