#include "censcan/graph_build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "censcan/errors.hpp"

namespace censcan {

namespace {

std::vector<std::string> collect_vocabulary(const std::vector<Document>& docs,
                                            const std::string& reference_source,
                                            const std::string& target_source) {
  std::set<std::string> vocab;
  for (const Document& d : docs) {
    if (d.source != reference_source && d.source != target_source) continue;
    vocab.insert(d.tokens.begin(), d.tokens.end());
  }
  return {vocab.begin(), vocab.end()};
}

}  // namespace

CorpusCounts build_daily_graphs(const std::vector<Document>& docs, int days,
                                const std::string& reference_source,
                                const std::string& target_source) {
  if (days <= 0) throw InputError("study period length must be positive");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const Document& d = docs[i];
    if (d.day < 1 || d.day > days) {
      throw InputError("document " + std::to_string(i + 1) + " (source=" +
                       d.source + ") has day " + std::to_string(d.day) +
                       " outside {1,...," + std::to_string(days) + "}");
    }
  }

  CorpusCounts out;
  out.days = days;
  out.vocabulary = collect_vocabulary(docs, reference_source, target_source);
  const int n = static_cast<int>(out.vocabulary.size());
  std::unordered_map<std::string, NodeId> index;
  index.reserve(out.vocabulary.size());
  for (NodeId i = 0; i < n; ++i) index[out.vocabulary[i]] = i;

  out.a_counts.assign(n, std::vector<double>(days, 0.0));
  out.b_counts.assign(n, std::vector<double>(days, 0.0));

  std::map<int, DailyGraph> by_day;
  for (const Document& d : docs) {
    const bool is_ref = d.source == reference_source;
    const bool is_target = d.source == target_source;
    if (!is_ref && !is_target) continue;

    std::vector<NodeId> ids;
    ids.reserve(d.tokens.size());
    for (const std::string& tok : d.tokens) ids.push_back(index.at(tok));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    auto& counts = is_ref ? out.a_counts : out.b_counts;
    for (NodeId v : ids) counts[v][d.day - 1] += 1.0;

    DailyGraph& g = by_day[d.day];
    g.day = d.day;
    for (NodeId v : ids) g.nodes.push_back(v);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        g.edges[{ids[i], ids[j]}] += 1.0;
      }
    }
  }
  for (auto& [day, g] : by_day) {
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
    out.daily_graphs.push_back(std::move(g));
  }
  return out;
}

CorrelationDecision correlation_filter(const std::vector<double>& series_a,
                                       const std::vector<double>& series_b,
                                       double threshold) {
  if (series_a.size() != series_b.size() || series_a.size() < 2) {
    throw std::invalid_argument("correlation_filter: need equal lengths >= 2");
  }
  const std::size_t n = series_a.size();
  const double mean_a =
      std::accumulate(series_a.begin(), series_a.end(), 0.0) / n;
  const double mean_b =
      std::accumulate(series_b.begin(), series_b.end(), 0.0) / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double da = series_a[t] - mean_a;
    const double db = series_b[t] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  CorrelationDecision decision;
  if (var_a == 0.0 || var_b == 0.0) {
    decision.degenerate = true;
    return decision;  // r undefined, keep = false
  }
  decision.r = cov / std::sqrt(var_a * var_b);
  decision.keep = decision.r > threshold;
  return decision;
}

void quantile_normalize(std::vector<double>& series_a,
                        std::vector<double>& series_b) {
  if (series_a.size() != series_b.size()) {
    throw std::invalid_argument("quantile_normalize: length mismatch");
  }
  const std::size_t n = series_a.size();
  if (n == 0) return;

  std::vector<double> sorted_a = series_a;
  std::vector<double> sorted_b = series_b;
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  std::vector<double> rank_mean(n);
  for (std::size_t r = 0; r < n; ++r) {
    rank_mean[r] = 0.5 * (sorted_a[r] + sorted_b[r]);
  }

  auto apply = [&](std::vector<double>& series, const std::vector<double>& sorted) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return series[i] < series[j];
    });
    std::size_t r = 0;
    while (r < n) {
      std::size_t r2 = r;
      while (r2 + 1 < n && sorted[r2 + 1] == sorted[r]) ++r2;
      double tie_value = 0.0;
      for (std::size_t k = r; k <= r2; ++k) tie_value += rank_mean[k];
      tie_value /= static_cast<double>(r2 - r + 1);
      for (std::size_t k = r; k <= r2; ++k) series[order[k]] = tie_value;
      r = r2 + 1;
    }
  };
  apply(series_a, sorted_a);
  apply(series_b, sorted_b);
}

std::vector<Edge> prune_edges(const std::vector<Edge>& edges, double gamma) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.weight >= gamma) kept.push_back(e);
  }
  return kept;
}

std::optional<double> estimate_baseline(const std::vector<double>& series,
                                        const BaselineMethod& method) {
  if (series.empty()) {
    throw std::invalid_argument("estimate_baseline: empty series");
  }
  double sum = 0.0;
  std::size_t count = 0;
  if (method.kind == BaselineMethod::Kind::kMeanExcludingWindow) {
    for (std::size_t t = 0; t < series.size(); ++t) {
      if (method.excluded.contains(static_cast<int>(t) + 1)) continue;
      sum += series[t];
      ++count;
    }
  }
  if (count == 0) {  // full mean, or the excluded window covered everything
    sum = std::accumulate(series.begin(), series.end(), 0.0);
    count = series.size();
  }
  const double mean = sum / static_cast<double>(count);
  if (mean <= 0.0) return std::nullopt;
  return mean;
}

std::optional<KeywordGraph> window_union(
    const std::vector<DailyGraph>& daily, TimeWindow window,
    const std::vector<std::string>& vocabulary,
    const std::vector<NodeSignals>& signals,
    const std::vector<char>& node_kept, double gamma, int days) {
  if (window.start < 1 || window.end > days || window.start > window.end) {
    throw std::invalid_argument("window_union: window outside study period");
  }
  std::map<std::pair<NodeId, NodeId>, double> unioned;
  for (const DailyGraph& g : daily) {
    if (!window.contains(g.day)) continue;
    for (const auto& [pair, w] : g.edges) {
      if (!node_kept[pair.first] || !node_kept[pair.second]) continue;
      unioned[pair] += w;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(unioned.size());
  for (const auto& [pair, w] : unioned) {
    if (w >= gamma) edges.push_back({pair.first, pair.second, w});
  }
  if (edges.empty()) return std::nullopt;

  // Connected components over surviving endpoints.
  std::set<NodeId> present;
  for (const Edge& e : edges) {
    present.insert(e.u);
    present.insert(e.v);
  }
  std::unordered_map<NodeId, std::vector<NodeId>> adj;
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::unordered_map<NodeId, int> component;
  int n_components = 0;
  for (NodeId start : present) {
    if (component.count(start)) continue;
    const int id = n_components++;
    std::queue<NodeId> frontier;
    frontier.push(start);
    component[start] = id;
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId w : adj[u]) {
        if (!component.count(w)) {
          component[w] = id;
          frontier.push(w);
        }
      }
    }
  }
  std::vector<int> size(n_components, 0);
  std::vector<NodeId> smallest(n_components, -1);
  for (NodeId v : present) {
    const int c = component[v];
    ++size[c];
    if (smallest[c] < 0) smallest[c] = v;  // iteration is in ascending id order
  }
  int best = 0;
  for (int c = 1; c < n_components; ++c) {
    if (size[c] > size[best] ||
        (size[c] == size[best] &&
         vocabulary[smallest[c]] < vocabulary[smallest[best]])) {
      best = c;
    }
  }

  KeywordGraph out;
  out.window_span = window;
  out.days = days;
  std::unordered_map<NodeId, NodeId> remap;
  for (NodeId v : present) {
    if (component[v] != best) continue;
    remap[v] = static_cast<NodeId>(out.keywords.size());
    out.keywords.push_back(vocabulary[v]);
    out.signals.push_back(signals[v]);
  }
  for (const Edge& e : edges) {
    auto iu = remap.find(e.u);
    if (iu == remap.end()) continue;
    auto iv = remap.find(e.v);
    if (iv == remap.end()) continue;
    NodeId u = iu->second, v = iv->second;
    if (u > v) std::swap(u, v);
    out.edges.push_back({u, v, e.weight});
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  out.build_adjacency();
  return out;
}

PreparedCorpus prepare_corpus(const std::vector<Document>& docs, int days,
                              const std::string& reference_source,
                              const std::string& target_source,
                              const GraphBuildOptions& options) {
  PreparedCorpus prepared;
  prepared.counts =
      build_daily_graphs(docs, days, reference_source, target_source);
  CorpusCounts& counts = prepared.counts;
  const int n = static_cast<int>(counts.vocabulary.size());
  prepared.signals.resize(n);
  prepared.node_kept.assign(n, 0);

  for (NodeId v = 0; v < n; ++v) {
    std::vector<double>& a = counts.a_counts[v];
    std::vector<double>& b = counts.b_counts[v];
    const bool a_empty = std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
    const bool b_empty = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
    if (a_empty || b_empty) continue;  // absent from one source
    if (days >= 2) {
      const CorrelationDecision d =
          correlation_filter(a, b, options.correlation_threshold);
      if (!d.keep) continue;
    }
    NodeSignals sig;
    sig.a_series = a;
    sig.b_series = b;
    quantile_normalize(sig.a_series, sig.b_series);
    const auto la = estimate_baseline(sig.a_series, options.baseline);
    const auto lb = estimate_baseline(sig.b_series, options.baseline);
    if (!la || !lb) continue;
    sig.lambda_a = *la;
    sig.lambda_b = *lb;
    prepared.signals[v] = std::move(sig);
    prepared.node_kept[v] = 1;
  }
  return prepared;
}

std::optional<KeywordGraph> build_study_graph(const PreparedCorpus& corpus,
                                              const GraphBuildOptions& options) {
  const int days = corpus.counts.days;
  const TimeWindow full{1, days};
  if (!options.prune_daily) {
    return window_union(corpus.counts.daily_graphs, full,
                        corpus.counts.vocabulary, corpus.signals,
                        corpus.node_kept, options.gamma, days);
  }
  // Per-day pruning: drop sub-threshold daily edges, then union with gamma 0.
  std::vector<DailyGraph> pruned = corpus.counts.daily_graphs;
  for (DailyGraph& g : pruned) {
    for (auto it = g.edges.begin(); it != g.edges.end();) {
      if (it->second < options.gamma) {
        it = g.edges.erase(it);
      } else {
        ++it;
      }
    }
  }
  return window_union(pruned, full, corpus.counts.vocabulary, corpus.signals,
                      corpus.node_kept, 0.0, days);
}

}  // namespace censcan
