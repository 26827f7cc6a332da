#include "censcan/detector.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>

#include "censcan/errors.hpp"
#include "censcan/parallel.hpp"
#include "censcan/projection.hpp"
#include "censcan/rng.hpp"
#include "censcan/synthetic.hpp"

namespace censcan {

namespace {

std::vector<TimeWindow> enumerate_windows(int days, int min_len, int max_len) {
  std::vector<TimeWindow> windows;
  if (min_len < 1 || min_len > max_len) {
    throw ConfigError("window lengths must satisfy 1 <= min <= max");
  }
  for (int start = 1; start <= days; ++start) {
    for (int len = min_len; len <= max_len; ++len) {
      const int end = start + len - 1;
      if (end > days) break;
      windows.push_back({start, end});
    }
  }
  std::sort(windows.begin(), windows.end(), [](const TimeWindow& a, const TimeWindow& b) {
    return std::pair(a.start, a.end) < std::pair(b.start, b.end);
  });
  return windows;
}

// Window sums redrawn under H0 for one replica, as per-cell Poisson draws.
WindowProblem null_replica(const KeywordGraph& graph, TimeWindow window,
                           std::uint64_t seed, int replica) {
  const int n = graph.node_count();
  std::vector<double> sums_a(n, 0.0), sums_b(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const NodeSignals& s = graph.signals[v];
    double a = 0.0, b = 0.0;
    for (int day = window.start; day <= window.end; ++day) {
      RngStream ra = derive_stream(
          seed, {kStreamNull, static_cast<std::uint64_t>(replica),
                 static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(day),
                 kSourceRef});
      RngStream rb = derive_stream(
          seed, {kStreamNull, static_cast<std::uint64_t>(replica),
                 static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(day),
                 kSourceTarget});
      a += static_cast<double>(poisson_sample(s.lambda_a, ra));
      b += static_cast<double>(poisson_sample(s.lambda_b, rb));
    }
    sums_a[v] = a;
    sums_b[v] = b;
  }
  return WindowProblem(graph, window, std::move(sums_a), std::move(sums_b));
}

// Null scores for M replicas over one window (shared by pooled and exact
// modes; the caller picks the seed path).
std::vector<double> replica_scores(const KeywordGraph& graph,
                                   TimeWindow window,
                                   const DetectorConfig& config,
                                   std::uint64_t seed) {
  std::vector<double> scores(config.replicas, 0.0);
  parallel_for(config.replicas, config.workers, [&](std::size_t r) {
    if (config.null_model == NullModel::kPoisson) {
      WindowProblem replica =
          null_replica(graph, window, seed, static_cast<int>(r));
      scores[r] = relaxed_graphmp(replica, config.optimizer).score;
    } else {
      // Permutation mode: score a randomly sampled connected cluster of a
      // typical size on the observed data.
      WindowProblem observed(graph, window);
      const int n = graph.node_count();
      const int size = std::min(
          n, std::max(1, config.optimizer.sparsity > 0
                             ? config.optimizer.sparsity
                             : auto_sparsity(n)));
      RngStream pick = derive_stream(seed, {kStreamPermute,
                                            static_cast<std::uint64_t>(r)});
      const int cluster_size =
          1 + static_cast<int>(pick.uniform_below(static_cast<std::uint64_t>(size)));
      const std::vector<NodeId> cluster = random_walk_subgraph(
          graph, cluster_size, 0.1,
          seed ^ (0x9e37ULL * (r + 1)) ^ kStreamPermute);
      scores[r] = observed.glrt(cluster);
    }
  });
  return scores;
}

double pvalue_from_pool(double observed, const std::vector<double>& pool) {
  int at_least = 0;
  for (double s : pool) {
    if (s >= observed) ++at_least;
  }
  return static_cast<double>(1 + at_least) /
         static_cast<double>(1 + pool.size());
}

}  // namespace

std::shared_ptr<const KeywordGraph> DailyWindowSource::window_graph(
    TimeWindow window) const {
  auto graph = window_union(corpus_->counts.daily_graphs, window,
                            corpus_->counts.vocabulary, corpus_->signals,
                            corpus_->node_kept, options_.gamma,
                            corpus_->counts.days);
  if (!graph) return nullptr;
  return std::make_shared<const KeywordGraph>(std::move(*graph));
}

std::vector<CandidateCluster> sweep_windows(const WindowSource& source,
                                            const DetectorConfig& config,
                                            const std::string& outlet) {
  const int days = source.days();
  if (config.min_window > days) return {};
  const std::vector<TimeWindow> windows =
      enumerate_windows(days, config.min_window, config.max_window);

  std::vector<std::optional<CandidateCluster>> slots(windows.size());
  std::vector<char> skipped(windows.size(), 0);
  parallel_for(windows.size(), config.workers, [&](std::size_t i) {
    const TimeWindow window = windows[i];
    const std::shared_ptr<const KeywordGraph> graph =
        source.window_graph(window);
    if (!graph || graph->node_count() == 0) {
      skipped[i] = 1;
      return;
    }
    const GraphMPResult result =
        relaxed_graphmp(*graph, window, config.optimizer);
    CandidateCluster candidate;
    candidate.nodes = result.nodes;
    candidate.keywords.reserve(result.nodes.size());
    for (NodeId v : result.nodes) candidate.keywords.push_back(graph->keywords[v]);
    candidate.window = window;
    candidate.score = result.score;
    candidate.rates = result.rates;
    candidate.outlet = outlet;
    slots[i] = std::move(candidate);
  });

  std::vector<CandidateCluster> out;
  out.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (skipped[i]) {
      std::cerr << "sweep: window [" << windows[i].start << ","
                << windows[i].end << "] has no graph, skipped\n";
      continue;
    }
    if (slots[i]) out.push_back(std::move(*slots[i]));
  }
  return out;
}

double randomization_pvalue(const CandidateCluster& candidate,
                            const WindowSource& source,
                            const DetectorConfig& config) {
  if (config.replicas < 19) {
    throw ConfigError("randomization testing needs at least 19 replicas");
  }
  const std::shared_ptr<const KeywordGraph> graph =
      source.window_graph(candidate.window);
  if (!graph) return 1.0;
  const std::vector<double> pool = replica_scores(
      *graph, candidate.window, config,
      derive_stream(config.seed,
                    {kStreamNull, static_cast<std::uint64_t>(candidate.window.start),
                     static_cast<std::uint64_t>(candidate.window.end)})
          .next_u64());
  return pvalue_from_pool(candidate.score, pool);
}

void compute_pvalues(std::vector<CandidateCluster>& candidates,
                     const WindowSource& source, const DetectorConfig& config) {
  if (config.replicas < 19) {
    throw ConfigError("randomization testing needs at least 19 replicas");
  }
  if (!config.pool_replicas) {
    for (CandidateCluster& c : candidates) {
      c.p_value = randomization_pvalue(c, source, config);
    }
    return;
  }
  // One pool per window length, built on the earliest window of that length.
  std::map<int, std::vector<double>> pools;
  for (const CandidateCluster& c : candidates) {
    const int len = c.window.length();
    if (pools.count(len)) continue;
    const std::shared_ptr<const KeywordGraph> graph =
        source.window_graph(c.window);
    if (!graph) continue;
    pools[len] = replica_scores(
        *graph, c.window, config,
        derive_stream(config.seed,
                      {kStreamNull, static_cast<std::uint64_t>(len)})
            .next_u64());
  }
  for (CandidateCluster& c : candidates) {
    auto it = pools.find(c.window.length());
    c.p_value = it == pools.end() ? 1.0 : pvalue_from_pool(c.score, it->second);
  }
}

std::vector<CandidateCluster> filter_significant(
    const std::vector<CandidateCluster>& candidates, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw ConfigError("alpha must lie in (0,1)");
  }
  std::vector<CandidateCluster> kept;
  for (const CandidateCluster& c : candidates) {
    if (c.p_value <= alpha) kept.push_back(c);
  }
  return kept;
}

std::vector<CandidateCluster> merge_overlapping(
    const std::vector<CandidateCluster>& candidates, int gap_days) {
  std::vector<CandidateCluster> sorted = candidates;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CandidateCluster& a, const CandidateCluster& b) {
                     if (a.p_value != b.p_value) return a.p_value < b.p_value;
                     if (a.window.start != b.window.start) {
                       return a.window.start < b.window.start;
                     }
                     return a.score < b.score;
                   });
  std::vector<CandidateCluster> kept;
  for (CandidateCluster& c : sorted) {
    bool merged_away = false;
    for (const CandidateCluster& k : kept) {
      if (TimeWindow::gap(c.window, k.window) <= gap_days) {
        merged_away = true;
        break;
      }
    }
    if (!merged_away) kept.push_back(std::move(c));
  }
  return kept;
}

DetectionReport detect(const WindowSource& source, const DetectorConfig& config,
                       const std::string& outlet) {
  std::vector<CandidateCluster> candidates =
      sweep_windows(source, config, outlet);
  compute_pvalues(candidates, source, config);
  DetectionReport report;
  report.outlet = outlet;
  report.indicators =
      merge_overlapping(filter_significant(candidates, config.alpha),
                        config.merge_gap_days);
  return report;
}

namespace {

double keyword_jaccard(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  int inter = 0;
  for (const std::string& kw : sa) inter += sb.count(kw) ? 1 : 0;
  const int uni = static_cast<int>(sa.size() + sb.size()) - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

}  // namespace

CrossOutletResult cross_outlet_filter(
    const std::vector<DetectionReport>& reports, double keyword_overlap_min,
    bool require_counterexample) {
  CrossOutletResult result;
  std::vector<std::pair<std::string, const CandidateCluster*>> all;
  std::set<std::string> analyzed;
  for (const DetectionReport& r : reports) {
    analyzed.insert(r.outlet);
    for (const CandidateCluster& c : r.indicators) {
      all.push_back({r.outlet, &c});
    }
  }
  if (analyzed.size() < 2) {
    result.single_outlet_passthrough = true;
    for (const auto& [outlet, c] : all) {
      IndicatorGroup g;
      g.members.push_back(*c);
      g.outlets.push_back(outlet);
      result.groups.push_back(std::move(g));
    }
    return result;
  }

  const int k = static_cast<int>(all.size());
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const CandidateCluster& ci = *all[i].second;
      const CandidateCluster& cj = *all[j].second;
      if (!ci.window.overlaps(cj.window)) continue;
      if (keyword_jaccard(ci.keywords, cj.keywords) < keyword_overlap_min) {
        continue;
      }
      parent[find(i)] = find(j);
    }
  }
  std::map<int, IndicatorGroup> groups;
  for (int i = 0; i < k; ++i) {
    IndicatorGroup& g = groups[find(i)];
    g.members.push_back(*all[i].second);
    g.outlets.push_back(all[i].first);
  }
  for (auto& [root, g] : groups) {
    std::sort(g.outlets.begin(), g.outlets.end());
    g.outlets.erase(std::unique(g.outlets.begin(), g.outlets.end()),
                    g.outlets.end());
    const bool in_all = g.outlets.size() == analyzed.size();
    const bool has_counterexample = g.outlets.size() < analyzed.size();
    if (in_all || (require_counterexample && !has_counterexample)) {
      ++result.discarded_all_outlets;
      continue;
    }
    result.groups.push_back(std::move(g));
  }
  return result;
}

}  // namespace censcan
