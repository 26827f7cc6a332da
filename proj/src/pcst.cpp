#include "censcan/pcst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace censcan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Moat-growth state. Merge-forest nodes: [0, n) are vertex singletons,
// later entries are merged clusters. A cluster's own dual grows during
// [birth, active_end); merging freezes both constituents.
struct Cluster {
  double prize = 0.0;       // total prize of contained vertices
  double moat_birth = 0.0;  // accumulated dual of the subtree at birth
  double birth = 0.0;
  double active_end = kInf;  // growth stops here (deactivation or merge)
  bool born_active = false;
  bool active = false;  // currently growing (roots only)
  int parent = -1;
  int child_left = -1, child_right = -1;
  int merge_edge = -1;         // instance edge that caused the merge
  int boundary_head = -1;      // intrusive list of candidate boundary parts
  int boundary_tail = -1;
};

struct Event {
  double time;
  int kind;  // 0 = edge fires (processed first on ties), 1 = deactivation
  int id;
  std::uint32_t version;
  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return kind > o.kind;
    return id > o.id;
  }
};

// One endpoint's accumulated-dual cache: base is chosen so that the total
// at time tau equals base + (dead dual along the forest path) + (own dual
// of the current root at tau).
struct SideCache {
  int cluster;
  double base = 0.0;
};

class GrowthSolver {
 public:
  explicit GrowthSolver(const PcstInstance& inst) : inst_(inst) {
    const int n = inst.node_count;
    double scale = 1.0;
    for (double p : inst.prizes) scale = std::max(scale, p);
    for (const Edge& e : inst.edges) scale = std::max(scale, e.weight);
    eps_ = 1e-10 * scale;

    clusters_.reserve(2 * n);
    dsu_parent_.reserve(2 * n);
    dsu_offset_.reserve(2 * n);
    for (int v = 0; v < n; ++v) {
      Cluster c;
      c.prize = inst.prizes[v];
      c.birth = 0.0;
      c.born_active = c.prize > eps_;
      c.active = c.born_active;
      c.active_end = c.born_active ? c.prize : 0.0;
      clusters_.push_back(std::move(c));
      dsu_parent_.push_back(v);
      dsu_offset_.push_back(0.0);
      if (clusters_[v].active) {
        ++active_count_;
        queue_.push({clusters_[v].active_end, 1, v, 0});
      }
    }
    const int m = static_cast<int>(inst.edges.size());
    side_u_.resize(m);
    side_v_.resize(m);
    edge_version_.assign(m, 0);
    part_next_.assign(2 * m, -1);
    for (int e = 0; e < m; ++e) {
      side_u_[e] = {inst.edges[e].u, 0.0};
      side_v_[e] = {inst.edges[e].v, 0.0};
      append_part(inst.edges[e].u, 2 * e);
      append_part(inst.edges[e].v, 2 * e + 1);
      schedule_edge(e, 0.0);
    }
  }

  void run() {
    while (active_count_ > 0 && !queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.kind == 0) {
        handle_edge(ev);
      } else {
        handle_deactivation(ev);
      }
    }
  }

  std::vector<int> final_roots() const {
    std::vector<int> roots;
    for (int c = 0; c < static_cast<int>(clusters_.size()); ++c) {
      if (clusters_[c].parent == -1) roots.push_back(c);
    }
    return roots;
  }

  // Leaf vertices and fired merge edges of a forest subtree.
  void collect(int root, std::vector<NodeId>& nodes,
               std::vector<int>& edges) const {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      if (c < inst_.node_count) {
        nodes.push_back(static_cast<NodeId>(c));
        continue;
      }
      edges.push_back(clusters_[c].merge_edge);
      stack.push_back(clusters_[c].child_left);
      stack.push_back(clusters_[c].child_right);
    }
  }

 private:
  // Union-find over the merge forest carrying the summed final duals of
  // dead nodes along each path, so endpoint dual totals are O(alpha).
  std::pair<int, double> find_with_sum(int x) {
    double sum = 0.0;
    int root = x;
    while (dsu_parent_[root] != root) {
      sum += dsu_offset_[root];
      root = dsu_parent_[root];
    }
    // Path compression, keeping per-node offsets consistent.
    double prefix = sum;
    int node = x;
    while (dsu_parent_[node] != node) {
      const int next = dsu_parent_[node];
      const double offset = dsu_offset_[node];
      dsu_parent_[node] = root;
      dsu_offset_[node] = prefix;
      prefix -= offset;
      node = next;
    }
    return {root, sum};
  }

  int find_root(int x) { return find_with_sum(x).first; }

  void append_part(int cluster, int part) {
    Cluster& c = clusters_[cluster];
    if (c.boundary_tail < 0) {
      c.boundary_head = part;
    } else {
      part_next_[c.boundary_tail] = part;
    }
    c.boundary_tail = part;
    part_next_[part] = -1;
  }

  // O(1) concatenation of the two constituents' part lists.
  void splice_boundaries(int into, int a, int b) {
    Cluster& ca = clusters_[a];
    Cluster& cb = clusters_[b];
    Cluster& m = clusters_[into];
    if (ca.boundary_head < 0) {
      m.boundary_head = cb.boundary_head;
      m.boundary_tail = cb.boundary_tail;
    } else if (cb.boundary_head < 0) {
      m.boundary_head = ca.boundary_head;
      m.boundary_tail = ca.boundary_tail;
    } else {
      m.boundary_head = ca.boundary_head;
      part_next_[ca.boundary_tail] = cb.boundary_head;
      m.boundary_tail = cb.boundary_tail;
    }
    ca.boundary_head = ca.boundary_tail = -1;
    cb.boundary_head = cb.boundary_tail = -1;
  }

  bool is_growing(int root, double tau) const {
    const Cluster& c = clusters_[root];
    return c.active && tau < c.active_end - eps_;
  }

  // Own dual of forest node c accumulated by time tau.
  double own_dual(const Cluster& c, double tau) const {
    if (!c.born_active) return 0.0;
    return std::max(0.0, std::min(tau, c.active_end) - c.birth);
  }

  // Total dual accumulated around one endpoint up to tau; re-anchors the
  // cache at the current root.
  double side_total(SideCache& side, double tau) {
    const auto [root, dead_sum] = find_with_sum(side.cluster);
    side.cluster = root;
    side.base += dead_sum;
    return side.base + own_dual(clusters_[root], tau);
  }

  // Recomputes the edge's fire time from current state and queues it.
  void schedule_edge(int e, double tau) {
    const Edge& edge = inst_.edges[e];
    const int ru = find_root(side_u_[e].cluster);
    const int rv = find_root(side_v_[e].cluster);
    if (ru == rv) return;  // internal, never fires
    const double paid =
        side_total(side_u_[e], tau) + side_total(side_v_[e], tau);
    const double slack = edge.weight - paid;
    const int rate =
        (is_growing(ru, tau) ? 1 : 0) + (is_growing(rv, tau) ? 1 : 0);
    ++edge_version_[e];
    if (slack <= eps_) {
      queue_.push({tau, 0, e, edge_version_[e]});
    } else if (rate > 0) {
      queue_.push({tau + slack / rate, 0, e, edge_version_[e]});
    }
    // rate == 0 with positive slack: frozen; rescheduled when a side merges.
  }

  void handle_edge(const Event& ev) {
    const int e = ev.id;
    if (ev.version != edge_version_[e]) return;  // superseded
    const int ru = find_root(side_u_[e].cluster);
    const int rv = find_root(side_v_[e].cluster);
    if (ru == rv) return;
    const double tau = ev.time;
    const double paid =
        side_total(side_u_[e], tau) + side_total(side_v_[e], tau);
    const double slack = inst_.edges[e].weight - paid;
    if (slack > eps_) {
      // A contributor deactivated since this was scheduled; fix the estimate.
      schedule_edge(e, tau);
      return;
    }
    merge(ru, rv, e, tau);
  }

  void handle_deactivation(const Event& ev) {
    Cluster& c = clusters_[ev.id];
    if (c.parent != -1 || !c.active) return;
    c.active = false;
    --active_count_;
  }

  void merge(int ra, int rb, int via_edge, double tau) {
    const bool a_was_growing = is_growing(ra, tau);
    const bool b_was_growing = is_growing(rb, tau);

    const int id = static_cast<int>(clusters_.size());
    {
      Cluster& a = clusters_[ra];
      Cluster& b = clusters_[rb];
      a.active_end = std::min(a.active_end, tau);
      b.active_end = std::min(b.active_end, tau);

      Cluster merged;
      merged.prize = a.prize + b.prize;
      merged.moat_birth = a.moat_birth + own_dual(a, tau) + b.moat_birth +
                          own_dual(b, tau);
      merged.birth = tau;
      const double slack = merged.prize - merged.moat_birth;
      merged.born_active = slack > eps_;
      merged.active = merged.born_active;
      merged.active_end = merged.born_active ? tau + slack : tau;
      merged.child_left = ra;
      merged.child_right = rb;
      merged.merge_edge = via_edge;

      active_count_ -= (a.active ? 1 : 0) + (b.active ? 1 : 0);
      a.active = false;
      b.active = false;
      a.parent = id;
      b.parent = id;

      clusters_.push_back(std::move(merged));
    }
    dsu_parent_.push_back(id);
    dsu_offset_.push_back(0.0);
    dsu_parent_[ra] = id;
    dsu_offset_[ra] = own_dual(clusters_[ra], tau);
    dsu_parent_[rb] = id;
    dsu_offset_[rb] = own_dual(clusters_[rb], tau);

    if (clusters_[id].active) {
      ++active_count_;
      queue_.push({clusters_[id].active_end, 1, id, 0});
    }

    // A frozen side that just became part of a growing cluster resumes
    // paying; only those edges need fresh fire estimates. Estimates on the
    // side that kept growing stay valid or conservative.
    if (clusters_[id].active) {
      if (!a_was_growing) refresh_boundary(ra, tau);
      if (!b_was_growing) refresh_boundary(rb, tau);
    }
    splice_boundaries(id, ra, rb);
  }

  void refresh_boundary(int cluster, double tau) {
    Cluster& c = clusters_[cluster];
    int part = c.boundary_head;
    int prev = -1;
    while (part >= 0) {
      const int next = part_next_[part];
      const int e = part / 2;
      const int ru = find_root(side_u_[e].cluster);
      const int rv = find_root(side_v_[e].cluster);
      if (ru == rv) {
        // Internal now; unlink this part.
        if (prev < 0) {
          c.boundary_head = next;
        } else {
          part_next_[prev] = next;
        }
        if (next < 0) c.boundary_tail = prev;
      } else {
        schedule_edge(e, tau);
        prev = part;
      }
      part = next;
    }
  }

  const PcstInstance& inst_;
  double eps_ = 1e-12;
  std::vector<Cluster> clusters_;
  std::vector<int> dsu_parent_;
  std::vector<double> dsu_offset_;
  std::vector<SideCache> side_u_, side_v_;
  std::vector<int> part_next_;
  std::vector<std::uint32_t> edge_version_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
  int active_count_ = 0;
};

// Strong pruning: best subtree of a tree under prize-minus-cost, via a
// rerooting pass so every vertex is considered as the subtree anchor.
// Scratch buffers are reused across the (possibly many) final clusters.
struct PruneScratch {
  std::vector<int> local;  // node id -> local index, -1 elsewhere
  explicit PruneScratch(int n) : local(n, -1) {}
};

struct PrunedTree {
  std::vector<NodeId> nodes;
  std::vector<int> edge_ids;
  double net_value = 0.0;
};

PrunedTree strong_prune(const PcstInstance& inst,
                        const std::vector<NodeId>& nodes,
                        const std::vector<int>& edge_ids,
                        PruneScratch& scratch) {
  const int k = static_cast<int>(nodes.size());
  PrunedTree best;
  if (k == 0) return best;
  if (k == 1) {
    best.nodes = nodes;
    best.net_value = inst.prizes[nodes[0]];
    return best;
  }

  std::vector<int>& local = scratch.local;
  for (int i = 0; i < k; ++i) local[nodes[i]] = i;
  struct Arc {
    int to;
    int edge_id;
    double cost;
  };
  std::vector<std::vector<Arc>> adj(k);
  for (int e : edge_ids) {
    const Edge& edge = inst.edges[e];
    const int u = local[edge.u];
    const int v = local[edge.v];
    adj[u].push_back({v, e, edge.weight});
    adj[v].push_back({u, e, edge.weight});
  }
  for (int i = 0; i < k; ++i) local[nodes[i]] = -1;  // reset scratch

  std::vector<int> order;
  order.reserve(k);
  std::vector<int> parent(k, -1);
  std::vector<char> seen(k, 0);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    for (const Arc& arc : adj[u]) {
      if (seen[arc.to]) continue;
      seen[arc.to] = 1;
      parent[arc.to] = u;
      order.push_back(arc.to);
    }
  }

  // down[v]: best value of the subtree rooted at v (children direction).
  std::vector<double> down(k, 0.0);
  for (int i = k - 1; i >= 0; --i) {
    const int u = order[i];
    double value = inst.prizes[nodes[u]];
    for (const Arc& arc : adj[u]) {
      if (arc.to == parent[u]) continue;
      value += std::max(0.0, down[arc.to] - arc.cost);
    }
    down[u] = value;
  }
  // up[v]: best value reachable through the parent edge, after paying it.
  std::vector<double> up(k, 0.0);
  for (int i = 0; i < k; ++i) {
    const int u = order[i];
    for (const Arc& arc : adj[u]) {
      if (arc.to == parent[u]) continue;
      const double others =
          down[u] - std::max(0.0, down[arc.to] - arc.cost) + up[u];
      up[arc.to] = std::max(0.0, others - arc.cost);
    }
  }

  int best_anchor = -1;
  double best_value = -kInf;
  for (int i = 0; i < k; ++i) {
    const double value = down[i] + up[i];
    const bool better = best_anchor < 0 || value > best_value ||
                        (value == best_value && nodes[i] < nodes[best_anchor]);
    if (better) {
      best_value = value;
      best_anchor = i;
    }
  }

  // Rebuild from the anchor, keeping branches with positive contribution.
  std::vector<char> keep(k, 0);
  std::vector<int> stack{best_anchor};
  keep[best_anchor] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Arc& arc : adj[u]) {
      if (keep[arc.to]) continue;
      const double contribution =
          arc.to == parent[u] ? up[u]
                              : std::max(0.0, down[arc.to] - arc.cost);
      if (contribution > 0.0) {
        keep[arc.to] = 1;
        best.edge_ids.push_back(arc.edge_id);
        stack.push_back(arc.to);
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (keep[i]) best.nodes.push_back(nodes[i]);
  }
  std::sort(best.nodes.begin(), best.nodes.end());
  best.net_value = best_value;
  return best;
}

bool input_connected(const PcstInstance& inst) {
  const int n = inst.node_count;
  if (n == 0) return false;
  std::vector<int> degree(n, 0);
  for (const Edge& e : inst.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<int> offset(n + 1, 0);
  for (int v = 0; v < n; ++v) offset[v + 1] = offset[v] + degree[v];
  std::vector<int> neighbor(offset[n]);
  std::vector<int> cursor(offset.begin(), offset.end() - 1);
  for (const Edge& e : inst.edges) {
    neighbor[cursor[e.u]++] = e.v;
    neighbor[cursor[e.v]++] = e.u;
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int i = offset[u]; i < offset[u + 1]; ++i) {
      const int w = neighbor[i];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

PcstResult pcst_solve(const PcstInstance& instance) {
  const int n = instance.node_count;
  if (n <= 0 || static_cast<int>(instance.prizes.size()) != n) {
    throw std::invalid_argument("pcst_solve: bad instance");
  }
  for (const Edge& e : instance.edges) {
    if (e.weight <= 0.0) {
      throw std::invalid_argument("pcst_solve: edge costs must be positive");
    }
  }
  if (!input_connected(instance)) {
    throw std::invalid_argument("pcst_solve: input graph must be connected");
  }

  GrowthSolver solver(instance);
  solver.run();

  PcstResult best;
  double best_value = -kInf;
  NodeId best_min_node = std::numeric_limits<NodeId>::max();
  PruneScratch scratch(n);
  std::vector<NodeId> nodes;
  std::vector<int> edges;
  for (int root : solver.final_roots()) {
    nodes.clear();
    edges.clear();
    solver.collect(root, nodes, edges);
    // Singleton clusters dominate the forest; handle them without the DP.
    if (nodes.size() == 1) {
      const double value = instance.prizes[nodes[0]];
      if (value > best_value + 1e-15 ||
          (value >= best_value - 1e-15 && nodes[0] < best_min_node)) {
        best_value = value;
        best_min_node = nodes[0];
        best.nodes = {nodes[0]};
        best.edge_ids.clear();
        best.net_value = value;
      }
      continue;
    }
    PrunedTree pruned = strong_prune(instance, nodes, edges, scratch);
    if (pruned.nodes.empty()) continue;
    const NodeId min_node = pruned.nodes.front();
    if (pruned.net_value > best_value + 1e-15 ||
        (pruned.net_value >= best_value - 1e-15 && min_node < best_min_node)) {
      best_value = pruned.net_value;
      best_min_node = min_node;
      best.nodes = std::move(pruned.nodes);
      best.edge_ids = std::move(pruned.edge_ids);
      best.net_value = pruned.net_value;
    }
  }
  best.prize_value = 0.0;
  for (NodeId v : best.nodes) best.prize_value += instance.prizes[v];
  return best;
}

}  // namespace censcan
