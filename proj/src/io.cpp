#include "qgraph/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

using nlohmann::json;

json graph_to_json(const MetricGraph& graph) {
  json vertices = json::array();
  for (const auto& v : graph.vertices()) {
    json jv = {{"id", v.id}};
    if (v.x) jv["x"] = *v.x;
    if (v.y) jv["y"] = *v.y;
    vertices.push_back(std::move(jv));
  }
  json arcs = json::array();
  for (const auto& a : graph.arcs()) {
    arcs.push_back({{"id", a.id}, {"from", a.from}, {"to", a.to}, {"length", a.length}});
  }
  return {{"vertices", std::move(vertices)}, {"arcs", std::move(arcs)}};
}

MetricGraph graph_from_json(const json& doc) {
  try {
    std::vector<Vertex> vertices;
    for (const auto& jv : doc.at("vertices")) {
      Vertex v{jv.at("id").get<int>(), std::nullopt, std::nullopt};
      if (jv.contains("x") && !jv["x"].is_null()) v.x = jv["x"].get<double>();
      if (jv.contains("y") && !jv["y"].is_null()) v.y = jv["y"].get<double>();
      vertices.push_back(v);
    }
    std::vector<Arc> arcs;
    for (const auto& ja : doc.at("arcs")) {
      arcs.push_back({ja.at("id").get<int>(), ja.at("from").get<int>(), ja.at("to").get<int>(),
                      ja.at("length").get<double>()});
    }
    return MetricGraph(std::move(vertices), std::move(arcs));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed graph document: ") + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

MetricGraph read_graph(const std::filesystem::path& path) { return graph_from_json(read_json(path)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path.string());
  out << text;
}

void write_graph(const MetricGraph& graph, const std::filesystem::path& path) {
  write_text(path, graph_to_json(graph).dump(2) + "\n");
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace qgraph
