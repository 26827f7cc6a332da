// censcan: detects censorship-pattern indicators by comparing keyword
// activity in an uncensored reference stream against a target outlet.
// Subcommands: build-graph, detect, inject, benchmark, report.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "censcan/config.hpp"
#include "censcan/detector.hpp"
#include "censcan/errors.hpp"
#include "censcan/evaluation.hpp"
#include "censcan/graph_build.hpp"
#include "censcan/io.hpp"
#include "censcan/synthetic.hpp"

namespace {

using namespace censcan;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

void add_common_options(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--correlation-threshold", config.correlation_threshold,
                 "Keep keywords with cross-source correlation above this");
  cmd.add_option("--gamma", config.gamma, "Minimum co-occurrence edge weight");
  cmd.add_flag("--prune-daily", config.prune_daily,
               "Prune edges per day instead of on union weights");
  cmd.add_option("--min-window", config.min_window, "Shortest window (days)");
  cmd.add_option("--max-window", config.max_window, "Longest window (days)");
  cmd.add_option("--alpha", config.alpha, "Significance level");
  cmd.add_option("--replicas", config.replicas,
                 "Null replicas per p-value (0 disables significance)");
  cmd.add_option("--sparsity", config.sparsity,
                 "Support budget for detected clusters (0 = automatic)");
  cmd.add_option("--seed", config.seed, "Random seed");
  cmd.add_option("--workers", config.workers, "Worker threads");
  cmd.add_option("--null-model", config.null_model,
                 "Null model: poisson or permute");
  cmd.add_option("--pool-replicas", config.pool_replicas,
                 "Share one replica pool per window length");
  cmd.add_option("--merge-gap-days", config.merge_gap_days,
                 "Windows within this many days merge into the better one");
  cmd.add_option("--keyword-overlap-min", config.keyword_overlap_min,
                 "Jaccard threshold for grouping indicators across outlets");
  cmd.add_option("--epsilon-obj", config.epsilon_obj,
                 "Objective-improvement halting threshold");
  cmd.add_option("--max-iters", config.max_iters, "Optimizer iterations");
  cmd.add_option("--restart-prob", config.restart_prob,
                 "Random-walk restart probability");
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

int cmd_build_graph(const std::string& docs_path, const std::string& out_path,
                    const std::string& reference, const std::string& target,
                    int days, const RunConfig& config) {
  std::ifstream in(docs_path);
  if (!in) throw InputError("cannot open: " + docs_path);
  const std::vector<Document> docs = parse_documents(in);
  if (docs.empty()) throw InputError("no documents in " + docs_path);
  if (days <= 0) {
    for (const Document& d : docs) days = std::max(days, d.day);
  }
  const GraphBuildOptions options = config.build_options();
  const PreparedCorpus corpus =
      prepare_corpus(docs, days, reference, target, options);
  const std::optional<KeywordGraph> graph = build_study_graph(corpus, options);
  if (!graph) {
    throw InputError("no edges survive filtering; graph is empty");
  }
  save_json(graph_to_json(*graph, config), out_path);
  std::cerr << "graph: " << graph->node_count() << " nodes, "
            << graph->edges.size() << " edges over T=" << days << " days\n";
  return kExitOk;
}

int cmd_detect(const std::string& graph_path, const std::string& out_path,
               std::string outlet, const RunConfig& config) {
  auto graph = std::make_shared<const KeywordGraph>(load_graph(graph_path));
  if (outlet.empty()) outlet = stem_of(graph_path);
  FixedWindowSource source(graph);
  DetectorConfig det = config.detector_config();

  DetectionReport report;
  if (det.replicas == 0) {
    // Significance disabled: report the merged sweep without p-values.
    report.outlet = outlet;
    report.indicators =
        merge_overlapping(sweep_windows(source, det, outlet),
                          det.merge_gap_days);
  } else {
    report = detect(source, det, outlet);
  }
  save_json(report_to_json(report, config), out_path);
  std::cerr << "detect: " << report.indicators.size()
            << " indicator(s) for outlet " << outlet << "\n";
  return kExitOk;
}

int cmd_inject(const std::string& graph_path, const std::string& out_graph,
               const std::string& out_truth, double q_t, double q_n,
               double fraction, std::vector<int> window,
               const RunConfig& config) {
  auto graph = load_graph(graph_path);
  InjectionSpec spec;
  spec.fraction = fraction;
  spec.q_t = q_t;
  spec.q_n = q_n > 0.0 ? q_n : (q_t > 0.0 ? 1.0 / q_t : 1.0);
  spec.restart_prob = config.restart_prob;
  if (window.size() == 2) {
    spec.window = {window[0], window[1]};
  } else {
    const int len = std::min(5, graph.days);
    const int start = std::max(1, (graph.days - len) / 2 + 1);
    spec.window = {start, start + len - 1};
  }
  spec.seed = config.seed;
  auto [injected, truth] = inject_anomaly(graph, spec);
  save_json(graph_to_json(injected, config), out_graph);
  save_json(ground_truth_to_json(truth), out_truth);
  std::cerr << "inject: planted " << truth.nodes.size() << " nodes in ["
            << truth.window.start << "," << truth.window.end << "]\n";
  return kExitOk;
}

int cmd_benchmark(const std::vector<std::string>& graph_paths, int synthetic_n,
                  int synthetic_days, const std::vector<double>& q_t_values,
                  const std::vector<double>& fractions, int trials,
                  const std::string& out_csv, const std::string& out_json,
                  double cell_timeout, const RunConfig& config) {
  std::vector<std::shared_ptr<const KeywordGraph>> bases;
  for (const std::string& path : graph_paths) {
    bases.push_back(std::make_shared<const KeywordGraph>(load_graph(path)));
  }
  if (bases.empty()) {
    for (int i = 0; i < std::max(1, trials); ++i) {
      SyntheticGraphConfig g;
      g.node_count = synthetic_n;
      g.days = synthetic_days;
      g.seed = config.seed + static_cast<std::uint64_t>(i);
      bases.push_back(
          std::make_shared<const KeywordGraph>(make_synthetic_graph(g)));
    }
  }
  BenchmarkConfig bench;
  bench.q_t_values = q_t_values;
  bench.fractions = fractions;
  bench.trials = trials;
  bench.seed = config.seed;
  bench.workers = config.workers;
  bench.cell_timeout_sec = cell_timeout;
  bench.detector = config.detector_config();
  const BenchmarkGrid grid = run_benchmark(bases, bench);

  if (!out_csv.empty()) {
    std::ofstream csv(out_csv);
    if (!csv) throw InputError("cannot open for writing: " + out_csv);
    write_benchmark_csv(csv, grid);
  }
  if (!out_json.empty()) {
    save_json(benchmark_to_json(grid, config), out_json);
  }
  for (const BenchmarkCell& cell : grid.cells) {
    const DetectionScore mean = cell.mean();
    std::cerr << "q_t=" << cell.q_t << " x=" << cell.fraction
              << " mean F=" << mean.f_score
              << (cell.incomplete ? " (incomplete)" : "") << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& report_paths,
               const std::string& out_path, int top_k,
               bool require_counterexample, const RunConfig& config) {
  std::vector<DetectionReport> reports;
  for (const std::string& path : report_paths) {
    reports.push_back(report_from_json(load_json(path)));
  }
  const CrossOutletResult result = cross_outlet_filter(
      reports, config.keyword_overlap_min, require_counterexample);
  if (result.single_outlet_passthrough) {
    std::cerr << "warning: single outlet, cross-outlet filter passed through\n";
  }
  save_json(cross_outlet_to_json(result, config), out_path);

  // Console summary: groups ranked by their best p-value.
  std::vector<std::pair<double, const IndicatorGroup*>> ranked;
  for (const IndicatorGroup& g : result.groups) {
    double best_p = 1.0;
    for (const CandidateCluster& c : g.members) {
      best_p = std::min(best_p, c.p_value);
    }
    ranked.push_back({best_p, &g});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [p, group] : ranked) {
    const CandidateCluster* best = nullptr;
    for (const CandidateCluster& c : group->members) {
      if (!best || c.p_value < best->p_value) best = &c;
    }
    std::cerr << "p=" << p << " window=[" << best->window.start << ","
              << best->window.end << "] outlets=" << group->outlets.size()
              << " keywords:";
    for (int i = 0; i < top_k && i < static_cast<int>(best->keywords.size());
         ++i) {
      std::cerr << ' ' << best->keywords[i];
    }
    std::cerr << "\n";
  }
  std::cerr << "report: " << result.groups.size() << " group(s), "
            << result.discarded_all_outlets << " discarded as all-outlet\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"censcan: censorship-pattern detection over keyword graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  RunConfig config;

  auto* build = app.add_subcommand("build-graph",
                                   "Build a keyword graph from documents");
  std::string docs_path, graph_out, reference = "twitter", target = "news";
  int days = 0;
  build->add_option("--docs", docs_path, "JSON-lines documents")->required();
  build->add_option("--out", graph_out, "Output graph JSON")->required();
  build->add_option("--reference", reference, "Reference (uncensored) source");
  build->add_option("--target", target, "Target outlet source");
  build->add_option("--days", days, "Study period length (default: max day)");
  add_common_options(*build, config);

  auto* detect_cmd = app.add_subcommand("detect", "Detect indicators");
  std::string graph_path, report_out, outlet;
  detect_cmd->add_option("--graph", graph_path, "Graph JSON")->required();
  detect_cmd->add_option("--out", report_out, "Output report JSON")->required();
  detect_cmd->add_option("--outlet", outlet, "Outlet label for the report");
  add_common_options(*detect_cmd, config);

  auto* inject = app.add_subcommand("inject", "Plant a synthetic anomaly");
  std::string inject_graph, inject_out_graph, inject_out_truth;
  double q_t = 2.0, q_n = 0.0, fraction = 0.1;
  std::vector<int> window;
  inject->add_option("--graph", inject_graph, "Base graph JSON")->required();
  inject->add_option("--out-graph", inject_out_graph, "Perturbed graph")
      ->required();
  inject->add_option("--out-truth", inject_out_truth, "Ground truth JSON")
      ->required();
  inject->add_option("--q-t", q_t, "Reference-source intensity (>= 1)");
  inject->add_option("--q-n", q_n, "Target-source intensity (default 1/q_t)");
  inject->add_option("--fraction", fraction, "Planted fraction of nodes");
  inject->add_option("--window", window, "Injection window: start end")
      ->expected(2);
  add_common_options(*inject, config);

  auto* bench = app.add_subcommand("benchmark", "Precision/recall/F grid");
  std::vector<std::string> bench_graphs;
  std::vector<double> q_t_values{1.0, 2.0, 10.0};
  std::vector<double> fractions{0.05, 0.10, 0.15};
  int trials = 10, synthetic_n = 300, synthetic_days = 14;
  double cell_timeout = 0.0;
  std::string bench_csv, bench_json;
  bench->add_option("--graph", bench_graphs, "Base graph files (repeatable)");
  bench->add_option("--synthetic-n", synthetic_n,
                    "Synthetic base size when no graphs given");
  bench->add_option("--synthetic-days", synthetic_days, "Synthetic period");
  bench->add_option("--q-t", q_t_values, "Grid of q_t values");
  bench->add_option("--fractions", fractions, "Grid of planted fractions");
  bench->add_option("--trials", trials, "Trials per cell");
  bench->add_option("--cell-timeout-sec", cell_timeout,
                    "Wall-clock budget per cell (0 = unlimited)");
  bench->add_option("--out-csv", bench_csv, "Per-trial CSV");
  bench->add_option("--out-json", bench_json, "Summary JSON");
  add_common_options(*bench, config);

  auto* report_cmd =
      app.add_subcommand("report", "Cross-outlet grouping and summaries");
  std::vector<std::string> report_inputs;
  std::string report_combined;
  int top_k = 5;
  bool require_counterexample = false;
  report_cmd->add_option("--inputs", report_inputs, "Per-outlet report files")
      ->required();
  report_cmd->add_option("--out", report_combined, "Combined output JSON")
      ->required();
  report_cmd->add_option("--top-k", top_k, "Keywords per indicator summary");
  report_cmd->add_flag("--require-counterexample", require_counterexample,
                       "Keep only groups absent from at least one outlet");
  add_common_options(*report_cmd, config);

  CLI11_PARSE(app, argc, argv);

  try {
    config.validate();
    if (build->parsed()) {
      return cmd_build_graph(docs_path, graph_out, reference, target, days,
                             config);
    }
    if (detect_cmd->parsed()) {
      return cmd_detect(graph_path, report_out, outlet, config);
    }
    if (inject->parsed()) {
      return cmd_inject(inject_graph, inject_out_graph, inject_out_truth, q_t,
                        q_n, fraction, window, config);
    }
    if (bench->parsed()) {
      return cmd_benchmark(bench_graphs, synthetic_n, synthetic_days,
                           q_t_values, fractions, trials, bench_csv, bench_json,
                           cell_timeout, config);
    }
    if (report_cmd->parsed()) {
      return cmd_report(report_inputs, report_combined, top_k,
                        require_counterexample, config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
