#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph file format:
//   {"vertices": [{"id": int, "x": float?, "y": float?}],
//    "arcs": [{"id": int, "from": int, "to": int, "length": float}]}
nlohmann::json graph_to_json(const MetricGraph& graph);
MetricGraph graph_from_json(const nlohmann::json& doc);

MetricGraph read_graph(const std::filesystem::path& path);
void write_graph(const MetricGraph& graph, const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

}  // namespace qgraph
