#include <doctest.h>

#include <cmath>
#include <vector>

#include "censcan/rng.hpp"
#include "censcan/scan_stat.hpp"
#include "support/oracles.hpp"

using namespace censcan;

namespace {

KeywordGraph tiny_graph(int n, int days, std::uint64_t seed) {
  oracle::SmallGraphSpec spec;
  spec.n = n;
  spec.days = days;
  spec.seed = seed;
  spec.plant_bump = true;
  return oracle::random_small_graph(spec);
}

}  // namespace

TEST_CASE("mle rates clamp to the feasible side") {
  CHECK(mle_rates({20, 5, 10, 10}).q_a_hat == doctest::Approx(2.0));
  CHECK(mle_rates({8, 5, 10, 10}).q_a_hat == doctest::Approx(1.0));
  CHECK(mle_rates({0, 5, 10, 10}).q_b_hat == doctest::Approx(0.5));
  CHECK(mle_rates({0, 15, 10, 10}).q_b_hat == doctest::Approx(1.0));
}

TEST_CASE("scan score matches frozen values") {
  // Frozen from an independent high-precision evaluation.
  CHECK(glrt_from_counts({20, 5, 10, 10}) ==
        doctest::Approx(5.397207708399181).epsilon(1e-12));
  // Deflated reference: the first term clamps to zero.
  CHECK(glrt_from_counts({8, 5, 10, 10}) ==
        doctest::Approx(1.534264097200273).epsilon(1e-12));
  CHECK(glrt_from_counts({10, 10, 10, 10}) == 0.0);
  // Zero observed target counts: 0*log(0) term vanishes, B_b remains.
  CHECK(glrt_from_counts({10, 0, 10, 10}) == doctest::Approx(10.0));
}

TEST_CASE("scan score never negative and matches oracle on random tuples") {
  RngStream rng(42);
  for (int i = 0; i < 2000; ++i) {
    const double b_a = std::exp(rng.uniform(-2.0, 6.0));
    const double b_b = std::exp(rng.uniform(-2.0, 6.0));
    double c_a = b_a * rng.uniform(0.0, 3.0);
    double c_b = b_b * rng.uniform(0.0, 3.0);
    if (i % 7 == 0) c_a = 0.0;
    if (i % 11 == 0) c_b = 0.0;
    const AggregateCounts ag{c_a, c_b, b_a, b_b};
    const double got = glrt_from_counts(ag);
    const double want =
        static_cast<double>(oracle::score_reference(c_a, b_a, c_b, b_b));
    CHECK(got >= 0.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("aggregate counts sum series over the window") {
  KeywordGraph g = tiny_graph(5, 3, 7);
  const TimeWindow w{1, 2};
  WindowProblem problem(g, w);
  const std::vector<NodeId> subset{0, 2, 4};
  const AggregateCounts ag = problem.aggregate(subset);
  double c_a = 0, c_b = 0, b_a = 0, b_b = 0;
  for (NodeId v : subset) {
    for (int t = 0; t < 2; ++t) {
      c_a += g.signals[v].a_series[t];
      c_b += g.signals[v].b_series[t];
    }
    b_a += 2 * g.signals[v].lambda_a;
    b_b += 2 * g.signals[v].lambda_b;
  }
  CHECK(ag.c_a == doctest::Approx(c_a));
  CHECK(ag.c_b == doctest::Approx(c_b));
  CHECK(ag.b_a == doctest::Approx(b_a));
  CHECK(ag.b_b == doctest::Approx(b_b));

  SUBCASE("length-1 window, singleton set") {
    WindowProblem single(g, {2, 2});
    const AggregateCounts one = single.aggregate(std::vector<NodeId>{3});
    CHECK(one.c_a == doctest::Approx(g.signals[3].a_series[1]));
    CHECK(one.b_a == doctest::Approx(g.signals[3].lambda_a));
  }
  SUBCASE("empty set rejected") {
    CHECK_THROWS_AS(problem.aggregate({}), std::invalid_argument);
  }
}

TEST_CASE("relaxed score equals discrete score on binary vectors") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    KeywordGraph g = tiny_graph(7, 4, seed);
    WindowProblem problem(g, {2, 3});
    RngStream rng(seed ^ 0xabcdef);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x(g.node_count(), 0.0);
      std::vector<NodeId> support;
      for (int v = 0; v < g.node_count(); ++v) {
        if (rng.uniform01() < 0.5) {
          x[v] = 1.0;
          support.push_back(v);
        }
      }
      if (support.empty()) {
        x[0] = 1.0;
        support.push_back(0);
      }
      const double relaxed = problem.relaxed_value(x);
      const double discrete = problem.glrt(support);
      CHECK(std::abs(relaxed - discrete) <=
            1e-12 * std::max(1.0, std::abs(discrete)));
    }
  }
}

TEST_CASE("relaxed score at fractional points matches direct formula") {
  KeywordGraph g = tiny_graph(6, 4, 11);
  WindowProblem problem(g, {1, 3});
  std::vector<double> x(g.node_count(), 0.5);
  const double got = problem.relaxed_value(x);
  long double ca = 0, cb = 0, wa = 0, wb = 0;
  for (int v = 0; v < g.node_count(); ++v) {
    for (int t = 0; t < 3; ++t) {
      ca += 0.5L * g.signals[v].a_series[t];
      cb += 0.5L * g.signals[v].b_series[t];
    }
    wa += 0.5L * g.signals[v].lambda_a;
    wb += 0.5L * g.signals[v].lambda_b;
  }
  const double want = static_cast<double>(
      oracle::score_reference(ca, 3.0L * wa, cb, 3.0L * wb));
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(
      problem.relaxed_value(std::vector<double>(g.node_count(), 0.0)),
      std::invalid_argument);
}

TEST_CASE("gradient matches central finite differences at interior points") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    KeywordGraph g = tiny_graph(8, 4, seed + 100);
    WindowProblem problem(g, {2, 4});
    RngStream rng(seed * 977);
    const int n = g.node_count();
    std::vector<double> x(n), grad(n);
    for (int rep = 0; rep < 20; ++rep) {
      for (int v = 0; v < n; ++v) x[v] = rng.uniform(0.1, 0.9);
      problem.relaxed_gradient(x, grad);
      const double h = 1e-5;
      double max_norm = 0.0;
      for (int v = 0; v < n; ++v) {
        max_norm = std::max(max_norm, std::abs(grad[v]));
      }
      for (int v = 0; v < n; ++v) {
        std::vector<double> hi = x, lo = x;
        hi[v] += h;
        lo[v] -= h;
        const double fd =
            (problem.relaxed_value(hi) - problem.relaxed_value(lo)) / (2 * h);
        const double denom =
            std::max({std::abs(grad[v]), 1e-8 * max_norm, 1e-12});
        CHECK(std::abs(fd - grad[v]) / denom < 1e-4);
      }
    }
  }
}

TEST_CASE("gradient vanishes when both aggregates sit at baseline") {
  KeywordGraph g;
  g.days = 2;
  g.window_span = {1, 2};
  g.keywords = {"a", "b"};
  NodeSignals s1{{3.0, 3.0}, {5.0, 5.0}, 3.0, 5.0};
  NodeSignals s2{{2.0, 2.0}, {4.0, 4.0}, 2.0, 4.0};
  g.signals = {s1, s2};
  g.edges = {{0, 1, 10.0}};
  g.build_adjacency();
  WindowProblem problem(g, {1, 2});
  std::vector<double> x{1.0, 1.0}, grad(2);
  problem.relaxed_gradient(x, grad);
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == 0.0);
  CHECK(problem.relaxed_value(x) == 0.0);
}

TEST_CASE("duplicate nodes receive identical gradient entries") {
  KeywordGraph g;
  g.days = 2;
  g.window_span = {1, 2};
  g.keywords = {"a", "b", "c"};
  NodeSignals dup{{9.0, 7.0}, {1.0, 2.0}, 4.0, 6.0};
  NodeSignals other{{5.0, 5.0}, {5.0, 5.0}, 5.0, 5.0};
  g.signals = {dup, other, dup};
  g.edges = {{0, 1, 10.0}, {1, 2, 10.0}};
  g.build_adjacency();
  WindowProblem problem(g, {1, 2});
  std::vector<double> x{0.4, 0.7, 0.4}, grad(3);
  problem.relaxed_gradient(x, grad);
  CHECK(grad[0] == doctest::Approx(grad[2]).epsilon(1e-14));
}

TEST_CASE("scaling reference counts and rates by c scales the first term by c") {
  RngStream rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const double b_a = rng.uniform(1.0, 50.0);
    const double c_a = b_a * rng.uniform(1.1, 4.0);
    const double scale = rng.uniform(0.5, 8.0);
    // B_b = 1, C_b = 0 contributes exactly 1.0; strip it to isolate term a.
    const AggregateCounts base{c_a, 0.0, b_a, 1.0};
    const AggregateCounts scaled{scale * c_a, 0.0, scale * b_a, 1.0};
    const double term = glrt_from_counts(base) - 1.0;
    const double term_scaled = glrt_from_counts(scaled) - 1.0;
    CHECK(mle_rates(base).q_a_hat ==
          doctest::Approx(mle_rates(scaled).q_a_hat).epsilon(1e-12));
    CHECK(term_scaled == doctest::Approx(scale * term).epsilon(1e-9));
  }
}

TEST_CASE("objective is non-submodular: witnesses exist on random paths") {
  int instances_with_witness = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    KeywordGraph g;
    g.days = 3;
    g.window_span = {1, 3};
    RngStream rng(seed * 31 + 7);
    for (int v = 0; v < 6; ++v) {
      g.keywords.push_back("p" + std::to_string(v));
      NodeSignals s;
      s.lambda_a = rng.uniform(1.0, 10.0);
      s.lambda_b = rng.uniform(1.0, 10.0);
      for (int t = 0; t < 3; ++t) {
        s.a_series.push_back(std::floor(rng.uniform(0.0, 21.0)));
        s.b_series.push_back(std::floor(rng.uniform(0.0, 21.0)));
      }
      g.signals.push_back(std::move(s));
    }
    for (NodeId v = 0; v + 1 < 6; ++v) g.edges.push_back({v, v + 1, 10.0});
    g.build_adjacency();
    WindowProblem problem(g, {1, 3});

    auto mask_score = [&](unsigned mask) {
      std::vector<NodeId> nodes;
      for (int v = 0; v < 6; ++v) {
        if (mask & (1u << v)) nodes.push_back(v);
      }
      return nodes.empty() ? 0.0 : problem.glrt(nodes);
    };

    // Search for S subset of T (both missing v) violating diminishing returns.
    bool witness = false;
    for (int v = 0; v < 6 && !witness; ++v) {
      const unsigned rest = 0x3fu & ~(1u << v);
      for (unsigned t_mask = rest;; t_mask = (t_mask - 1) & rest) {
        for (unsigned s_mask = t_mask;; s_mask = (s_mask - 1) & t_mask) {
          if (s_mask != t_mask) {
            const double lhs =
                mask_score(s_mask | (1u << v)) - mask_score(s_mask);
            const double rhs =
                mask_score(t_mask | (1u << v)) - mask_score(t_mask);
            if (rhs > lhs + 1e-9) {
              witness = true;
              break;
            }
          }
          if (s_mask == 0) break;
        }
        if (witness || t_mask == 0) break;
      }
    }
    if (witness) ++instances_with_witness;
  }
  CHECK(instances_with_witness >= 1);
  // In practice nearly every random instance violates submodularity.
  CHECK(instances_with_witness > 50);
}
