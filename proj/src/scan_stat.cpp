#include "censcan/scan_stat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace censcan {

namespace {

double xlog_ratio(double c, double b) {
  return c > 0.0 ? c * std::log(c / b) : 0.0;
}

}  // namespace

RateEstimates mle_rates(const AggregateCounts& counts) {
  if (counts.b_a <= 0.0 || counts.b_b <= 0.0) {
    throw std::invalid_argument("mle_rates: expected totals must be positive");
  }
  RateEstimates r;
  r.q_a_hat = std::max(1.0, counts.c_a / counts.b_a);
  r.q_b_hat = std::min(1.0, counts.c_b / counts.b_b);
  return r;
}

double glrt_from_counts(const AggregateCounts& counts) {
  double f = 0.0;
  if (counts.c_a > counts.b_a) {
    f += xlog_ratio(counts.c_a, counts.b_a) + counts.b_a - counts.c_a;
  }
  if (counts.c_b < counts.b_b) {
    f += xlog_ratio(counts.c_b, counts.b_b) + counts.b_b - counts.c_b;
  }
  return f;
}

WindowProblem::WindowProblem(const KeywordGraph& graph, TimeWindow window)
    : graph_(&graph), window_(window) {
  if (window.start < 1 || window.end > graph.days || window.start > window.end) {
    throw std::invalid_argument("WindowProblem: window outside study period");
  }
  const int n = graph.node_count();
  sum_a_.resize(n);
  sum_b_.resize(n);
  lambda_a_.resize(n);
  lambda_b_.resize(n);
  for (int i = 0; i < n; ++i) {
    const NodeSignals& s = graph.signals[i];
    double a = 0.0, b = 0.0;
    for (int t = window.start - 1; t < window.end; ++t) {
      a += s.a_series[t];
      b += s.b_series[t];
    }
    sum_a_[i] = a;
    sum_b_[i] = b;
    lambda_a_[i] = s.lambda_a;
    lambda_b_[i] = s.lambda_b;
  }
}

WindowProblem::WindowProblem(const KeywordGraph& graph, TimeWindow window,
                             std::vector<double> window_sums_a,
                             std::vector<double> window_sums_b)
    : graph_(&graph),
      window_(window),
      sum_a_(std::move(window_sums_a)),
      sum_b_(std::move(window_sums_b)) {
  const int n = graph.node_count();
  if (static_cast<int>(sum_a_.size()) != n ||
      static_cast<int>(sum_b_.size()) != n) {
    throw std::invalid_argument("WindowProblem: window sum length mismatch");
  }
  lambda_a_.resize(n);
  lambda_b_.resize(n);
  for (int i = 0; i < n; ++i) {
    lambda_a_[i] = graph.signals[i].lambda_a;
    lambda_b_[i] = graph.signals[i].lambda_b;
  }
}

AggregateCounts WindowProblem::aggregate(std::span<const NodeId> nodes) const {
  if (nodes.empty()) {
    throw std::invalid_argument("aggregate: node set must be non-empty");
  }
  AggregateCounts ag;
  const double len = static_cast<double>(window_len());
  for (NodeId v : nodes) {
    ag.c_a += sum_a_[v];
    ag.c_b += sum_b_[v];
    ag.b_a += lambda_a_[v];
    ag.b_b += lambda_b_[v];
  }
  ag.b_a *= len;
  ag.b_b *= len;
  return ag;
}

double WindowProblem::glrt(std::span<const NodeId> nodes) const {
  return glrt_from_counts(aggregate(nodes));
}

double WindowProblem::singleton_glrt(NodeId v) const {
  const double len = static_cast<double>(window_len());
  AggregateCounts ag{sum_a_[v], sum_b_[v], lambda_a_[v] * len,
                     lambda_b_[v] * len};
  return glrt_from_counts(ag);
}

double WindowProblem::relaxed_value(std::span<const double> x) const {
  return relaxed_value_on({}, x);
}

void WindowProblem::relaxed_gradient(std::span<const double> x,
                                     std::span<double> out) const {
  relaxed_gradient_on({}, x, out);
}

// Shared dot products for the relaxed objective/gradient. An empty omega
// means "all nodes", with x indexed by node id.
double WindowProblem::relaxed_value_on(std::span<const NodeId> omega,
                                       std::span<const double> x_local) const {
  const bool full = omega.empty();
  const std::size_t m = full ? x_local.size() : omega.size();
  const double len = static_cast<double>(window_len());
  double ca = 0.0, cb = 0.0, wa = 0.0, wb = 0.0;
  bool any_positive = false;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = x_local[i];
    if (xi <= 0.0) continue;
    any_positive = true;
    const NodeId v = full ? static_cast<NodeId>(i) : omega[i];
    ca += sum_a_[v] * xi;
    cb += sum_b_[v] * xi;
    wa += lambda_a_[v] * xi;
    wb += lambda_b_[v] * xi;
  }
  if (!any_positive) {
    throw std::invalid_argument("relaxed_value: x has no positive entry");
  }
  const double ba = len * wa;
  const double bb = len * wb;
  double f = 0.0;
  if (ca > ba) f += xlog_ratio(ca, ba) + ba - ca;
  if (cb < bb) f += xlog_ratio(cb, bb) + bb - cb;
  return f;
}

void WindowProblem::relaxed_gradient_on(std::span<const NodeId> omega,
                                        std::span<const double> x_local,
                                        std::span<double> out_local) const {
  const bool full = omega.empty();
  const std::size_t m = full ? x_local.size() : omega.size();
  const double len = static_cast<double>(window_len());
  double ca = 0.0, cb = 0.0, wa = 0.0, wb = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = x_local[i];
    if (xi <= 0.0) continue;
    const NodeId v = full ? static_cast<NodeId>(i) : omega[i];
    ca += sum_a_[v] * xi;
    cb += sum_b_[v] * xi;
    wa += lambda_a_[v] * xi;
    wb += lambda_b_[v] * xi;
  }
  const double ba = len * wa;
  const double bb = len * wb;
  const bool block_a = ca > ba && wa > 0.0;
  const bool block_b = cb < bb && wb > 0.0;
  double log_a = 0.0, coeff_a = 0.0, log_b = 0.0, coeff_b = 0.0;
  if (block_a) {
    log_a = std::log(std::max(ca, kLogGuard) / std::max(ba, kLogGuard));
    coeff_a = len - ca / wa;
  }
  if (block_b) {
    log_b = std::log(std::max(cb, kLogGuard) / std::max(bb, kLogGuard));
    coeff_b = len - cb / wb;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const NodeId v = full ? static_cast<NodeId>(i) : omega[i];
    double g = 0.0;
    if (block_a) g += log_a * sum_a_[v] + coeff_a * lambda_a_[v];
    if (block_b) g += log_b * sum_b_[v] + coeff_b * lambda_b_[v];
    out_local[i] = g;
  }
}

AggregateCounts aggregate_counts(std::span<const NodeId> nodes,
                                 TimeWindow window, const KeywordGraph& graph) {
  return WindowProblem(graph, window).aggregate(nodes);
}

double glrt_score(std::span<const NodeId> nodes, TimeWindow window,
                  const KeywordGraph& graph) {
  return WindowProblem(graph, window).glrt(nodes);
}

double relaxed_score(std::span<const double> x, TimeWindow window,
                     const KeywordGraph& graph) {
  return WindowProblem(graph, window).relaxed_value(x);
}

std::vector<double> relaxed_gradient(std::span<const double> x,
                                     TimeWindow window,
                                     const KeywordGraph& graph) {
  WindowProblem problem(graph, window);
  std::vector<double> out(x.size());
  problem.relaxed_gradient(x, out);
  return out;
}

}  // namespace censcan
