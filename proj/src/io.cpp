#include "censcan/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "censcan/errors.hpp"

namespace censcan {

using nlohmann::json;

std::vector<Document> parse_documents(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;  // blank line
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("line " + std::to_string(line_no) +
                       ": invalid JSON (" + e.what() + ")");
    }
    Document d;
    try {
      d.source = j.at("source").get<std::string>();
      d.day = j.at("day").get<int>();
      for (const auto& tok : j.at("tokens")) {
        d.tokens.push_back(tok.get<std::string>());
      }
    } catch (const json::exception& e) {
      throw InputError("line " + std::to_string(line_no) +
                       ": bad document fields (" + e.what() + ")");
    }
    std::sort(d.tokens.begin(), d.tokens.end());
    d.tokens.erase(std::unique(d.tokens.begin(), d.tokens.end()),
                   d.tokens.end());
    if (d.tokens.empty()) {
      throw InputError("line " + std::to_string(line_no) +
                       ": document has no tokens");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

json config_to_json(const RunConfig& c) {
  // Worker count deliberately omitted: reports must not depend on it.
  json j;
  j["correlation_threshold"] = c.correlation_threshold;
  j["gamma"] = c.gamma;
  j["prune_daily"] = c.prune_daily;
  j["min_window"] = c.min_window;
  j["max_window"] = c.max_window;
  j["alpha"] = c.alpha;
  j["replicas"] = c.replicas;
  j["sparsity"] = c.sparsity;
  j["seed"] = c.seed;
  j["null_model"] = c.null_model;
  j["pool_replicas"] = c.pool_replicas;
  j["merge_gap_days"] = c.merge_gap_days;
  j["keyword_overlap_min"] = c.keyword_overlap_min;
  j["epsilon_obj"] = c.epsilon_obj;
  j["max_iters"] = c.max_iters;
  j["restart_prob"] = c.restart_prob;
  return j;
}

json graph_to_json(const KeywordGraph& graph, const RunConfig& config) {
  json nodes = json::array();
  for (int v = 0; v < graph.node_count(); ++v) {
    const NodeSignals& s = graph.signals[v];
    json node;
    node["kw"] = graph.keywords[v];
    node["a"] = s.a_series;
    node["b"] = s.b_series;
    node["lambda_a"] = s.lambda_a;
    node["lambda_b"] = s.lambda_b;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const Edge& e : graph.edges) {
    edges.push_back(json::array({e.u, e.v, e.weight}));
  }
  json j;
  j["T"] = graph.days;
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  j["config"] = config_to_json(config);
  return j;
}

KeywordGraph graph_from_json(const json& j) {
  KeywordGraph g;
  try {
    g.days = j.at("T").get<int>();
    for (const auto& node : j.at("nodes")) {
      g.keywords.push_back(node.at("kw").get<std::string>());
      NodeSignals s;
      s.a_series = node.at("a").get<std::vector<double>>();
      s.b_series = node.at("b").get<std::vector<double>>();
      s.lambda_a = node.at("lambda_a").get<double>();
      s.lambda_b = node.at("lambda_b").get<double>();
      g.signals.push_back(std::move(s));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw InputError("graph file: edge entries must be [u, v, weight]");
      }
      g.edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(),
                         e[2].get<double>()});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("graph file: schema violation (") + e.what() +
                     ")");
  }
  g.window_span = {1, g.days};
  g.validate();
  g.build_adjacency();
  return g;
}

KeywordGraph load_graph(const std::string& path) {
  return graph_from_json(load_json(path));
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InputError(path + ": invalid JSON (" + e.what() + ")");
  }
}

namespace {

json indicator_to_json(const CandidateCluster& c) {
  json j;
  j["keywords"] = c.keywords;
  j["window"] = json::array({c.window.start, c.window.end});
  j["score"] = c.score;
  j["q_a"] = c.rates.q_a_hat;
  j["q_b"] = c.rates.q_b_hat;
  j["p_value"] = c.p_value;
  return j;
}

CandidateCluster indicator_from_json(const json& j,
                                     const std::string& outlet) {
  CandidateCluster c;
  c.keywords = j.at("keywords").get<std::vector<std::string>>();
  c.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
  c.score = j.at("score").get<double>();
  c.rates.q_a_hat = j.at("q_a").get<double>();
  c.rates.q_b_hat = j.at("q_b").get<double>();
  c.p_value = j.at("p_value").get<double>();
  c.outlet = outlet;
  return c;
}

}  // namespace

json report_to_json(const DetectionReport& report, const RunConfig& config) {
  json indicators = json::array();
  for (const CandidateCluster& c : report.indicators) {
    indicators.push_back(indicator_to_json(c));
  }
  json j;
  j["outlet"] = report.outlet;
  j["indicators"] = std::move(indicators);
  j["config"] = config_to_json(config);
  return j;
}

DetectionReport report_from_json(const json& j) {
  DetectionReport report;
  try {
    report.outlet = j.at("outlet").get<std::string>();
    for (const auto& ind : j.at("indicators")) {
      report.indicators.push_back(indicator_from_json(ind, report.outlet));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report file: schema violation (") + e.what() +
                     ")");
  }
  return report;
}

json ground_truth_to_json(const InjectionGroundTruth& truth) {
  json j;
  j["nodes"] = truth.nodes;
  j["window"] = json::array({truth.window.start, truth.window.end});
  j["q_t"] = truth.spec.q_t;
  j["q_n"] = truth.spec.q_n;
  j["seed"] = truth.spec.seed;
  return j;
}

json benchmark_to_json(const BenchmarkGrid& grid, const RunConfig& config) {
  json cells = json::array();
  for (const BenchmarkCell& cell : grid.cells) {
    json c;
    c["q_t"] = cell.q_t;
    c["fraction"] = cell.fraction;
    c["incomplete"] = cell.incomplete;
    const DetectionScore mean = cell.mean();
    c["mean_precision"] = mean.precision;
    c["mean_recall"] = mean.recall;
    c["mean_fscore"] = mean.f_score;
    json trials = json::array();
    for (const TrialResult& t : cell.trials) {
      json tj;
      tj["trial"] = t.trial;
      tj["precision"] = t.score.precision;
      tj["recall"] = t.score.recall;
      tj["fscore"] = t.score.f_score;
      tj["runtime_ms"] = t.runtime_ms;
      tj["seed"] = t.seed;
      trials.push_back(std::move(tj));
    }
    c["trials"] = std::move(trials);
    cells.push_back(std::move(c));
  }
  json j;
  j["q_t_values"] = grid.q_t_values;
  j["fractions"] = grid.fractions;
  j["trials_per_cell"] = grid.trials_per_cell;
  j["cells"] = std::move(cells);
  j["config"] = config_to_json(config);
  return j;
}

json cross_outlet_to_json(const CrossOutletResult& result,
                          const RunConfig& config) {
  json groups = json::array();
  for (const IndicatorGroup& g : result.groups) {
    json gj;
    gj["outlets"] = g.outlets;
    json members = json::array();
    for (const CandidateCluster& c : g.members) {
      json m = indicator_to_json(c);
      m["outlet"] = c.outlet;
      members.push_back(std::move(m));
    }
    gj["members"] = std::move(members);
    groups.push_back(std::move(gj));
  }
  json j;
  j["groups"] = std::move(groups);
  j["discarded_all_outlets"] = result.discarded_all_outlets;
  j["single_outlet_passthrough"] = result.single_outlet_passthrough;
  j["config"] = config_to_json(config);
  return j;
}

}  // namespace censcan
