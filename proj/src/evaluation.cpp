#include "censcan/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>
#include <stdexcept>

#include "censcan/errors.hpp"
#include "censcan/rng.hpp"

namespace censcan {

DetectionScore score_detection(std::span<const NodeId> detected,
                               std::span<const NodeId> truth) {
  if (truth.empty()) {
    throw std::invalid_argument("score_detection: ground truth is empty");
  }
  std::set<NodeId> truth_set(truth.begin(), truth.end());
  int hits = 0;
  for (NodeId v : detected) hits += truth_set.count(v) ? 1 : 0;
  DetectionScore s;
  s.precision = detected.empty()
                    ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(detected.size());
  s.recall = static_cast<double>(hits) / static_cast<double>(truth_set.size());
  s.f_score = 2.0 * static_cast<double>(hits) /
              static_cast<double>(detected.size() + truth_set.size());
  return s;
}

DetectionScore BenchmarkCell::mean() const {
  DetectionScore m;
  if (trials.empty()) return m;
  for (const TrialResult& t : trials) {
    m.precision += t.score.precision;
    m.recall += t.score.recall;
    m.f_score += t.score.f_score;
  }
  const double k = static_cast<double>(trials.size());
  m.precision /= k;
  m.recall /= k;
  m.f_score /= k;
  return m;
}

namespace {

// Detected set for one injected graph: best significant candidate whose
// window overlaps the injection window, falling back to the global best.
std::vector<NodeId> pick_detected(const std::vector<CandidateCluster>& candidates,
                                  TimeWindow inject_window, double alpha,
                                  bool significance_enabled) {
  const CandidateCluster* best_overlap = nullptr;
  const CandidateCluster* best_any = nullptr;
  auto better = [](const CandidateCluster& c, const CandidateCluster* cur) {
    if (!cur) return true;
    if (c.score != cur->score) return c.score > cur->score;
    if (c.p_value != cur->p_value) return c.p_value < cur->p_value;
    return c.window.start < cur->window.start;
  };
  for (const CandidateCluster& c : candidates) {
    if (significance_enabled && c.p_value > alpha) continue;
    if (better(c, best_any)) best_any = &c;
    if (c.window.overlaps(inject_window) && better(c, best_overlap)) {
      best_overlap = &c;
    }
  }
  if (best_overlap) return best_overlap->nodes;
  if (best_any) return best_any->nodes;
  return {};
}

}  // namespace

BenchmarkGrid run_benchmark(
    const std::vector<std::shared_ptr<const KeywordGraph>>& base_graphs,
    const BenchmarkConfig& config) {
  if (config.trials < 1) throw ConfigError("benchmark: trials must be >= 1");
  if (base_graphs.empty()) throw ConfigError("benchmark: no base graphs");

  BenchmarkGrid grid;
  grid.q_t_values = config.q_t_values;
  grid.fractions = config.fractions;
  grid.trials_per_cell = config.trials;

  for (double q_t : config.q_t_values) {
    for (double fraction : config.fractions) {
      BenchmarkCell cell;
      cell.q_t = q_t;
      cell.fraction = fraction;
      const auto cell_start = std::chrono::steady_clock::now();
      for (int trial = 0; trial < config.trials; ++trial) {
        if (config.cell_timeout_sec > 0.0) {
          const std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - cell_start;
          if (elapsed.count() > config.cell_timeout_sec) {
            cell.incomplete = true;
            break;
          }
        }
        const std::shared_ptr<const KeywordGraph>& base =
            base_graphs[trial % base_graphs.size()];
        const int days = base->days;
        const int len = std::min(config.inject_window_len, days);
        const int start = std::max(1, (days - len) / 2 + 1);

        InjectionSpec spec;
        spec.fraction = fraction;
        spec.q_t = q_t;
        spec.q_n = q_t > 0.0 ? 1.0 / q_t : 1.0;
        spec.window = {start, start + len - 1};
        spec.seed = derive_stream(config.seed,
                                  {kStreamBenchmark,
                                   static_cast<std::uint64_t>(trial),
                                   static_cast<std::uint64_t>(q_t * 1000),
                                   static_cast<std::uint64_t>(fraction * 1000)})
                        .next_u64();

        const auto t0 = std::chrono::steady_clock::now();
        auto [injected, truth] = inject_anomaly(*base, spec);
        FixedWindowSource source(
            std::make_shared<const KeywordGraph>(std::move(injected)));

        DetectorConfig det = config.detector;
        det.seed = spec.seed;
        const bool significance = det.replicas >= 19;
        std::vector<CandidateCluster> candidates = sweep_windows(source, det);
        if (significance) compute_pvalues(candidates, source, det);
        const std::vector<NodeId> detected =
            pick_detected(candidates, truth.window, det.alpha, significance);
        const auto t1 = std::chrono::steady_clock::now();

        TrialResult result;
        result.trial = trial;
        result.seed = spec.seed;
        result.score = score_detection(detected, truth.nodes);
        result.runtime_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        cell.trials.push_back(result);
      }
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkGrid& grid) {
  out << "q_t,fraction,trial,precision,recall,fscore,runtime_ms\n";
  for (const BenchmarkCell& cell : grid.cells) {
    for (const TrialResult& t : cell.trials) {
      out << cell.q_t << ',' << cell.fraction << ',' << t.trial << ','
          << t.score.precision << ',' << t.score.recall << ','
          << t.score.f_score << ',' << t.runtime_ms << '\n';
    }
  }
}

}  // namespace censcan
