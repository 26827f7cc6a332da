#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "censcan/config.hpp"
#include "censcan/detector.hpp"
#include "censcan/evaluation.hpp"
#include "censcan/synthetic.hpp"
#include "censcan/types.hpp"

namespace censcan {

/// Parses JSON-lines documents: {"source": str, "day": int, "tokens": [str]}.
/// Tokens are deduplicated; empty token lists and malformed lines raise
/// InputError naming the line number.
std::vector<Document> parse_documents(std::istream& in);

/// Graph file schema: {"T": int, "nodes": [{"kw", "a", "b", "lambda_a",
/// "lambda_b"}], "edges": [[u, v, weight]]} plus an embedded "config".
nlohmann::json graph_to_json(const KeywordGraph& graph, const RunConfig& config);
KeywordGraph graph_from_json(const nlohmann::json& j);
KeywordGraph load_graph(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

/// Report schema: {"outlet": str, "indicators": [{"keywords", "window",
/// "score", "q_a", "q_b", "p_value"}], "config": {...}}.
nlohmann::json report_to_json(const DetectionReport& report,
                              const RunConfig& config);
DetectionReport report_from_json(const nlohmann::json& j);

nlohmann::json ground_truth_to_json(const InjectionGroundTruth& truth);
nlohmann::json benchmark_to_json(const BenchmarkGrid& grid,
                                 const RunConfig& config);
nlohmann::json cross_outlet_to_json(const CrossOutletResult& result,
                                    const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

}  // namespace censcan
