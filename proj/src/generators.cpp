#include "qgraph/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

// Crossing parameters (t along a, u along b), both strictly inside (0, 1).
std::optional<std::pair<double, double>> crossing(const Segment& a, const Segment& b) {
  constexpr double kEdgeTol = 1e-12;
  const double rx = a.x1 - a.x0, ry = a.y1 - a.y0;
  const double sx = b.x1 - b.x0, sy = b.y1 - b.y0;
  const double denom = rx * sy - ry * sx;
  if (std::abs(denom) < 1e-300) return std::nullopt;
  const double qx = b.x0 - a.x0, qy = b.y0 - a.y0;
  const double t = (qx * sy - qy * sx) / denom;
  const double u = (qx * ry - qy * rx) / denom;
  if (t <= kEdgeTol || t >= 1.0 - kEdgeTol || u <= kEdgeTol || u >= 1.0 - kEdgeTol) return std::nullopt;
  return std::make_pair(t, u);
}

MetricGraph trim_short_leaves(MetricGraph graph, double epsilon) {
  while (true) {
    std::vector<Arc> kept;
    bool removed = false;
    for (const auto& a : graph.arcs()) {
      bool leaf = graph.degree(a.from) == 1 || graph.degree(a.to) == 1;
      bool isolated = graph.degree(a.from) == 1 && graph.degree(a.to) == 1;
      if (leaf && !isolated && a.length < epsilon) {
        removed = true;
        continue;
      }
      kept.push_back(a);
    }
    if (!removed) return graph;
    std::vector<Vertex> vertices;
    std::map<int, int> deg;
    for (const auto& a : kept) {
      ++deg[a.from];
      ++deg[a.to];
    }
    for (const auto& v : graph.vertices()) {
      if (deg.contains(v.id)) vertices.push_back(v);
    }
    graph = merge_degree_two(MetricGraph(std::move(vertices), std::move(kept)));
  }
}

}  // namespace

MetricGraph generate_buffon(const BuffonOptions& options) {
  if (options.needle_count < 2) {
    throw Error(ErrorCode::kInvalidArgs, "needle_count must be at least 2");
  }
  if (!(options.box_side > 0.0)) throw Error(ErrorCode::kInvalidArgs, "box_side must be positive");
  const auto& law = options.length_law;
  if (!(law.a > 0.0) || law.b < law.a) throw Error(ErrorCode::kInvalidArgs, "invalid needle length law");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(options.needle_count);
  std::vector<Segment> needles(n);
  for (auto& s : needles) {
    const double cx = options.box_side * unit(rng);
    const double cy = options.box_side * unit(rng);
    const double theta = std::numbers::pi * unit(rng);
    const double len = law.kind == LengthLaw::Kind::kFixed ? law.a : law.a + (law.b - law.a) * unit(rng);
    const double dx = 0.5 * len * std::cos(theta), dy = 0.5 * len * std::sin(theta);
    s = {cx - dx, cy - dy, cx + dx, cy + dy};
  }

  // Split points per needle: (parameter, vertex id).
  std::vector<std::vector<std::pair<double, int>>> cuts(n);
  std::vector<Vertex> vertices;
  int next_vertex = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto hit = crossing(needles[i], needles[j]);
      if (!hit) continue;
      const auto& s = needles[i];
      const double t = hit->first;
      vertices.push_back({next_vertex, s.x0 + t * (s.x1 - s.x0), s.y0 + t * (s.y1 - s.y0)});
      cuts[i].emplace_back(t, next_vertex);
      cuts[j].emplace_back(hit->second, next_vertex);
      ++next_vertex;
    }
  }
  if (vertices.empty()) throw Error(ErrorCode::kEmptyGraph, "no two needles intersect");

  std::vector<Arc> arcs;
  int next_arc = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (cuts[i].empty()) continue;
    const auto& s = needles[i];
    const double len = std::hypot(s.x1 - s.x0, s.y1 - s.y0);
    auto& c = cuts[i];
    std::sort(c.begin(), c.end());
    const int start = next_vertex++;
    const int stop = next_vertex++;
    vertices.push_back({start, s.x0, s.y0});
    vertices.push_back({stop, s.x1, s.y1});
    double prev_t = 0.0;
    int prev_v = start;
    for (auto [t, v] : c) {
      arcs.push_back({next_arc++, prev_v, v, (t - prev_t) * len});
      prev_t = t;
      prev_v = v;
    }
    arcs.push_back({next_arc++, prev_v, stop, (1.0 - prev_t) * len});
  }

  MetricGraph full(std::move(vertices), std::move(arcs));
  auto components = connected_components(full);
  auto largest = std::max_element(components.begin(), components.end(),
                                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  MetricGraph graph = merge_degree_two(induced_subgraph(full, *largest));
  if (options.trim_epsilon > 0.0) graph = trim_short_leaves(std::move(graph), options.trim_epsilon);

  // Compact vertex ids to 1..n.
  std::map<int, int> remap;
  std::vector<Vertex> out_vertices;
  for (const auto& v : graph.vertices()) {
    const int id = static_cast<int>(remap.size()) + 1;
    remap[v.id] = id;
    out_vertices.push_back({id, v.x, v.y});
  }
  std::vector<Arc> out_arcs;
  for (const auto& a : graph.arcs()) {
    out_arcs.push_back({static_cast<int>(out_arcs.size()) + 1, remap.at(a.from), remap.at(a.to), a.length});
  }
  return MetricGraph(std::move(out_vertices), std::move(out_arcs));
}

MetricGraph load_g14() {
  // Vertices 1..8 are IEEE buses 2, 4, 5, 6, 7, 8, 9, 13. Buses 1, 3, 10,
  // 11, 12 and 14 have degree 2 and are absorbed into arcs. The arc labeling
  // was chosen so that the spectrum matches the published eigenvalues.
  std::vector<Vertex> vertices;
  for (int id = 1; id <= 8; ++id) vertices.push_back({id, std::nullopt, std::nullopt});
  std::vector<Arc> arcs = {
      {1, 1, 3, 11.91371443}, {2, 1, 2, 7.08276253}, {3, 1, 2, 6.0},
      {4, 1, 3, 2.236067977}, {5, 2, 3, 4.123105626}, {6, 2, 5, 1.414213562},
      {7, 2, 7, 2.0},         {8, 3, 4, 1.0},         {9, 4, 7, 4.7169892},
      {10, 4, 8, 4.472135955}, {11, 4, 8, 2.0},       {12, 5, 6, 2.0},
      {13, 5, 7, 1.414213562}, {14, 7, 8, 4.472135955},
  };
  return MetricGraph(std::move(vertices), std::move(arcs));
}

}  // namespace qgraph
