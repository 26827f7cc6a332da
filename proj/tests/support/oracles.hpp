// Test-only oracles, written independently of the library code paths they
// check: a long-double scan-score evaluator, brute-force enumeration over
// connected subsets, pairwise document counting, and a BFS component finder.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "censcan/rng.hpp"
#include "censcan/types.hpp"

namespace oracle {

// High-precision evaluation of the clamped two-block divergence score.
inline long double score_reference(long double c_a, long double b_a,
                                   long double c_b, long double b_b) {
  long double f = 0.0L;
  if (c_a / b_a > 1.0L) {
    long double t = (c_a > 0.0L ? c_a * std::log(c_a / b_a) : 0.0L);
    f += t + b_a - c_a;
  }
  if (c_b / b_b < 1.0L) {
    long double t = (c_b > 0.0L ? c_b * std::log(c_b / b_b) : 0.0L);
    f += t + b_b - c_b;
  }
  return f;
}

// Brute-force score of a node subset over a window, straight from series.
inline double subset_score(const censcan::KeywordGraph& g,
                           const std::vector<censcan::NodeId>& nodes,
                           censcan::TimeWindow w) {
  long double c_a = 0, c_b = 0, b_a = 0, b_b = 0;
  for (censcan::NodeId v : nodes) {
    for (int t = w.start - 1; t < w.end; ++t) {
      c_a += g.signals[v].a_series[t];
      c_b += g.signals[v].b_series[t];
    }
    b_a += g.signals[v].lambda_a * w.length();
    b_b += g.signals[v].lambda_b * w.length();
  }
  return static_cast<double>(score_reference(c_a, b_a, c_b, b_b));
}

// All connected subsets of a small graph (n <= ~16), as sorted node lists.
inline std::vector<std::vector<censcan::NodeId>> connected_subsets(
    const censcan::KeywordGraph& g) {
  const int n = g.node_count();
  std::vector<std::uint32_t> adj_bits(n, 0);
  for (const censcan::Edge& e : g.edges) {
    adj_bits[e.u] |= 1u << e.v;
    adj_bits[e.v] |= 1u << e.u;
  }
  std::vector<std::vector<censcan::NodeId>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int start = __builtin_ctz(mask);
    std::uint32_t seen = 1u << start;
    std::uint32_t frontier = seen;
    while (frontier) {
      std::uint32_t next = 0;
      std::uint32_t f = frontier;
      while (f) {
        const int v = __builtin_ctz(f);
        f &= f - 1;
        next |= adj_bits[v] & mask & ~seen;
      }
      seen |= next;
      frontier = next;
    }
    if (seen != mask) continue;
    std::vector<censcan::NodeId> nodes;
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) nodes.push_back(v);
    }
    out.push_back(std::move(nodes));
  }
  return out;
}

// Exhaustive maximum of the scan score over connected subsets; optionally
// restricted to subsets of size <= max_size (0 = unlimited).
inline double best_connected_score(const censcan::KeywordGraph& g,
                                   censcan::TimeWindow w, int max_size = 0) {
  double best = 0.0;
  for (const auto& nodes : connected_subsets(g)) {
    if (max_size > 0 && static_cast<int>(nodes.size()) > max_size) continue;
    best = std::max(best, subset_score(g, nodes, w));
  }
  return best;
}

// Pairwise co-occurrence counts from raw documents (for graph-build checks).
inline std::map<std::pair<std::string, std::string>, int> pair_counts(
    const std::vector<censcan::Document>& docs, int day) {
  std::map<std::pair<std::string, std::string>, int> counts;
  for (const censcan::Document& d : docs) {
    if (d.day != day) continue;
    std::vector<std::string> toks = d.tokens;
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (std::size_t i = 0; i < toks.size(); ++i) {
      for (std::size_t j = i + 1; j < toks.size(); ++j) {
        counts[{toks[i], toks[j]}] += 1;
      }
    }
  }
  return counts;
}

// BFS connectivity over an explicit node set, using graph adjacency.
inline bool set_connected(const censcan::KeywordGraph& g,
                          const std::vector<censcan::NodeId>& nodes) {
  if (nodes.empty()) return false;
  std::set<censcan::NodeId> in(nodes.begin(), nodes.end());
  std::set<censcan::NodeId> seen{nodes[0]};
  std::queue<censcan::NodeId> q;
  q.push(nodes[0]);
  while (!q.empty()) {
    const censcan::NodeId u = q.front();
    q.pop();
    for (std::int32_t k = g.adj_offsets[u]; k < g.adj_offsets[u + 1]; ++k) {
      const censcan::NodeId w = g.adj_neighbors[k];
      if (in.count(w) && !seen.count(w)) {
        seen.insert(w);
        q.push(w);
      }
    }
  }
  return seen.size() == in.size();
}

// Small random connected graph with Poisson-ish random signals; the `bump`
// options scale the a-series up and b-series down inside a window so that
// instances have planted structure.
struct SmallGraphSpec {
  int n = 8;
  int days = 4;
  double extra_edge_prob = 0.3;
  bool plant_bump = false;
  std::uint64_t seed = 1;
};

inline censcan::KeywordGraph random_small_graph(const SmallGraphSpec& spec) {
  censcan::RngStream rng(spec.seed * 0x9e3779b97f4a7c15ULL + 12345);
  censcan::KeywordGraph g;
  g.days = spec.days;
  g.window_span = {1, spec.days};
  for (int v = 0; v < spec.n; ++v) {
    g.keywords.push_back("w" + std::to_string(v));
  }
  for (censcan::NodeId v = 1; v < spec.n; ++v) {
    const censcan::NodeId u =
        static_cast<censcan::NodeId>(rng.uniform_below(v));
    g.edges.push_back({u, v, 10.0});
  }
  for (censcan::NodeId u = 0; u < spec.n; ++u) {
    for (censcan::NodeId v = u + 1; v < spec.n; ++v) {
      if (rng.uniform01() < spec.extra_edge_prob) {
        bool exists = false;
        for (const censcan::Edge& e : g.edges) {
          if (e.u == u && e.v == v) exists = true;
        }
        if (!exists) g.edges.push_back({u, v, 10.0});
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const censcan::Edge& a, const censcan::Edge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });

  const int bump_lo = std::max(1, spec.days / 2);
  const int bump_hi = std::min(spec.days, bump_lo + 1);
  for (int v = 0; v < spec.n; ++v) {
    censcan::NodeSignals s;
    s.lambda_a = rng.uniform(2.0, 12.0);
    s.lambda_b = rng.uniform(2.0, 12.0);
    const bool bumped = spec.plant_bump && rng.uniform01() < 0.4;
    for (int t = 1; t <= spec.days; ++t) {
      double scale_a = 1.0, scale_b = 1.0;
      if (bumped && t >= bump_lo && t <= bump_hi) {
        scale_a = rng.uniform(1.5, 3.0);
        scale_b = rng.uniform(0.2, 0.7);
      }
      censcan::RngStream cell(rng.next_u64());
      s.a_series.push_back(static_cast<double>(
          censcan::poisson_sample(scale_a * s.lambda_a, cell)));
      s.b_series.push_back(static_cast<double>(
          censcan::poisson_sample(scale_b * s.lambda_b, cell)));
    }
    g.signals.push_back(std::move(s));
  }
  g.build_adjacency();
  return g;
}

}  // namespace oracle
