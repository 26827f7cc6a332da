#include "censcan/types.hpp"

#include <algorithm>
#include <queue>

#include "censcan/errors.hpp"

namespace censcan {

NodeId KeywordGraph::index_of(const std::string& kw) const {
  // Keywords are stored sorted, so binary search doubles as the index.
  auto it = std::lower_bound(keywords.begin(), keywords.end(), kw);
  if (it != keywords.end() && *it == kw) {
    return static_cast<NodeId>(it - keywords.begin());
  }
  return -1;
}

void KeywordGraph::build_adjacency() {
  const int n = node_count();
  adj_offsets.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++adj_offsets[e.u + 1];
    ++adj_offsets[e.v + 1];
  }
  for (int i = 0; i < n; ++i) adj_offsets[i + 1] += adj_offsets[i];
  adj_neighbors.resize(edges.size() * 2);
  std::vector<std::int32_t> cursor(adj_offsets.begin(), adj_offsets.end() - 1);
  for (const Edge& e : edges) {
    adj_neighbors[cursor[e.u]++] = e.v;
    adj_neighbors[cursor[e.v]++] = e.u;
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adj_neighbors.begin() + adj_offsets[i],
              adj_neighbors.begin() + adj_offsets[i + 1]);
  }
}

bool KeywordGraph::is_connected() const {
  const int n = node_count();
  if (n == 0) return false;
  if (!has_adjacency()) {
    KeywordGraph copy = *this;
    copy.build_adjacency();
    return copy.is_connected();
  }
  std::vector<char> seen(n, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (std::int32_t k = adj_offsets[u]; k < adj_offsets[u + 1]; ++k) {
      const NodeId w = adj_neighbors[k];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

void KeywordGraph::validate() const {
  const int n = node_count();
  if (static_cast<int>(signals.size()) != n) {
    throw InputError("graph: signals/keywords size mismatch");
  }
  if (days <= 0) throw InputError("graph: study period length must be positive");
  for (int i = 0; i < n; ++i) {
    const NodeSignals& s = signals[i];
    if (static_cast<int>(s.a_series.size()) != days ||
        static_cast<int>(s.b_series.size()) != days) {
      throw InputError("graph: series length differs from study period at node " +
                       keywords[i]);
    }
    if (s.lambda_a <= 0.0 || s.lambda_b <= 0.0) {
      throw InputError("graph: non-positive baseline rate at node " + keywords[i]);
    }
    for (int t = 0; t < days; ++t) {
      if (s.a_series[t] < 0.0 || s.b_series[t] < 0.0) {
        throw InputError("graph: negative count at node " + keywords[i]);
      }
    }
  }
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InputError("graph: edge endpoint out of range");
    }
    if (e.u == e.v) throw InputError("graph: self-loop");
    if (e.u > e.v) throw InputError("graph: edge endpoints not ordered");
  }
}

}  // namespace censcan
