#include "qgraph/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Arc> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
  std::stable_sort(arcs_.begin(), arcs_.end(),
                   [](const Arc& a, const Arc& b) { return a.id < b.id; });
  incidence_.assign(vertices_.size(), {});
  for (std::size_t j = 0; j < arcs_.size(); ++j) {
    if (auto v = vertex_index(arcs_[j].from)) incidence_[*v].push_back({j, End::kOrigin});
    if (auto v = vertex_index(arcs_[j].to)) incidence_[*v].push_back({j, End::kTerminal});
  }
}

std::optional<std::size_t> MetricGraph::arc_index(int arc_id) const {
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), arc_id,
                             [](const Arc& a, int id) { return a.id < id; });
  if (it == arcs_.end() || it->id != arc_id) return std::nullopt;
  return static_cast<std::size_t>(it - arcs_.begin());
}

std::optional<std::size_t> MetricGraph::vertex_index(int vertex_id) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id == vertex_id) return i;
  }
  return std::nullopt;
}

const std::vector<ArcEnd>& MetricGraph::incident(int vertex_id) const {
  auto v = vertex_index(vertex_id);
  if (!v) throw Error(ErrorCode::kInvalidArgs, "unknown vertex " + std::to_string(vertex_id));
  return incidence_[*v];
}

int MetricGraph::end_vertex(ArcEnd end) const {
  const Arc& a = arcs_.at(end.arc);
  return end.end == End::kOrigin ? a.from : a.to;
}

double MetricGraph::total_length() const {
  return std::accumulate(arcs_.begin(), arcs_.end(), 0.0,
                         [](double s, const Arc& a) { return s + a.length; });
}

MetricGraph MetricGraph::with_length(int arc_id, double length) const {
  auto arcs = arcs_;
  auto j = arc_index(arc_id);
  if (!j) throw Error(ErrorCode::kInvalidArgs, "unknown arc " + std::to_string(arc_id));
  arcs[*j].length = length;
  return MetricGraph(vertices_, std::move(arcs));
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices_.size() != b.vertices_.size() || a.arcs_.size() != b.arcs_.size()) return false;
  for (std::size_t i = 0; i < a.vertices_.size(); ++i) {
    const auto& u = a.vertices_[i];
    const auto& v = b.vertices_[i];
    if (u.id != v.id || u.x != v.x || u.y != v.y) return false;
  }
  for (std::size_t j = 0; j < a.arcs_.size(); ++j) {
    const auto& p = a.arcs_[j];
    const auto& q = b.arcs_[j];
    if (p.id != q.id || p.from != q.from || p.to != q.to || p.length != q.length) return false;
  }
  return true;
}

std::string to_string(IssueCode code) {
  switch (code) {
    case IssueCode::kEmptyGraph: return "EMPTY_GRAPH";
    case IssueCode::kDuplicateVertexId: return "DUPLICATE_VERTEX_ID";
    case IssueCode::kDuplicateArcId: return "DUPLICATE_ARC_ID";
    case IssueCode::kDanglingEndpoint: return "DANGLING_ENDPOINT";
    case IssueCode::kNonpositiveLength: return "NONPOSITIVE_LENGTH";
    case IssueCode::kDegreeTwoVertex: return "DEGREE_TWO_VERTEX";
    case IssueCode::kDisconnected: return "DISCONNECTED";
  }
  return "UNKNOWN";
}

bool ValidationReport::has(IssueCode code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [code](const ValidationIssue& i) { return i.code == code; });
}

ValidationReport validate(const MetricGraph& graph, const ValidateOptions& options) {
  ValidationReport report;
  auto add = [&](IssueCode code, std::string message, int id) {
    report.issues.push_back({code, std::move(message), id});
  };

  if (graph.vertex_count() == 0 || graph.arc_count() == 0) {
    add(IssueCode::kEmptyGraph, "graph has no vertices or no arcs", 0);
  }

  std::set<int> vertex_ids;
  for (const auto& v : graph.vertices()) {
    if (!vertex_ids.insert(v.id).second) {
      add(IssueCode::kDuplicateVertexId, "vertex id " + std::to_string(v.id) + " repeated", v.id);
    }
  }

  std::set<int> arc_ids;
  for (const auto& a : graph.arcs()) {
    if (!arc_ids.insert(a.id).second) {
      add(IssueCode::kDuplicateArcId, "arc id " + std::to_string(a.id) + " repeated", a.id);
    }
    if (!vertex_ids.contains(a.from) || !vertex_ids.contains(a.to)) {
      std::ostringstream os;
      os << "arc " << a.id << " references missing vertex " << (vertex_ids.contains(a.from) ? a.to : a.from);
      add(IssueCode::kDanglingEndpoint, os.str(), a.id);
    }
    if (!(a.length > 0.0)) {
      std::ostringstream os;
      os << "arc " << a.id << " has length " << a.length;
      add(IssueCode::kNonpositiveLength, os.str(), a.id);
    }
  }

  if (!options.allow_degree_two) {
    for (const auto& v : graph.vertices()) {
      if (graph.degree(v.id) == 2) {
        add(IssueCode::kDegreeTwoVertex, "vertex " + std::to_string(v.id) + " has degree 2", v.id);
      }
    }
  }

  if (options.require_connected && graph.vertex_count() > 0) {
    auto components = connected_components(graph);
    for (std::size_t c = 1; c < components.size(); ++c) {
      add(IssueCode::kDisconnected,
          "component containing vertex " + std::to_string(components[c].front()) +
              " is not connected to vertex " + std::to_string(components[0].front()),
          components[c].front());
    }
  }
  return report;
}

void require_valid(const MetricGraph& graph, const ValidateOptions& options) {
  auto report = validate(graph, options);
  if (report.ok()) return;
  std::ostringstream os;
  os << "invalid graph:";
  for (const auto& issue : report.issues) os << " [" << to_string(issue.code) << "] " << issue.message << ";";
  throw Error(ErrorCode::kInvalidArgs, os.str());
}

std::vector<std::vector<int>> connected_components(const MetricGraph& graph) {
  const auto n = graph.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : graph.arcs()) {
    auto u = graph.vertex_index(a.from);
    auto v = graph.vertex_index(a.to);
    if (!u || !v) continue;
    auto ru = find(*u), rv = find(*v);
    if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
  }
  std::map<std::size_t, std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(graph.vertices()[i].id);
  std::vector<std::vector<int>> out;
  for (auto& [root, ids] : groups) out.push_back(std::move(ids));
  return out;
}

MetricGraph merge_degree_two(const MetricGraph& graph) {
  const auto& arcs = graph.arcs();
  auto is_anchor = [&](int vertex_id) { return graph.degree(vertex_id) != 2; };

  struct Chain {
    int min_id;
    int from;
    int to;
    double length;
  };
  std::vector<Chain> chains;
  std::vector<bool> used(arcs.size(), false);

  auto other_end = [](ArcEnd e) {
    return ArcEnd{e.arc, e.end == End::kOrigin ? End::kTerminal : End::kOrigin};
  };

  for (const auto& v : graph.vertices()) {
    if (!is_anchor(v.id)) continue;
    for (ArcEnd start : graph.incident(v.id)) {
      if (used[start.arc]) continue;
      // Walk from the anchor through degree-2 vertices.
      std::vector<ArcEnd> steps;  // entry end of each arc along the walk
      ArcEnd cur = start;
      int at = v.id;
      double length = 0.0;
      while (true) {
        used[cur.arc] = true;
        steps.push_back(cur);
        length += arcs[cur.arc].length;
        ArcEnd exit = other_end(cur);
        at = graph.end_vertex(exit);
        if (is_anchor(at)) break;
        const auto& inc = graph.incident(at);
        ArcEnd next = inc[0] == exit ? inc[1] : inc[0];
        cur = next;
      }
      // Orientation follows the lowest-id arc of the chain.
      std::size_t lowest = 0;
      for (std::size_t s = 1; s < steps.size(); ++s) {
        if (arcs[steps[s].arc].id < arcs[steps[lowest].arc].id) lowest = s;
      }
      bool forward = steps[lowest].end == End::kOrigin;
      Chain c{arcs[steps[lowest].arc].id, forward ? v.id : at, forward ? at : v.id, length};
      chains.push_back(c);
    }
  }
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    if (!used[j]) {
      throw Error(ErrorCode::kCycleOfDegreeTwo,
                  "arc " + std::to_string(arcs[j].id) + " lies on a cycle of degree-2 vertices");
    }
  }

  std::sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) { return a.min_id < b.min_id; });
  std::vector<Arc> out_arcs;
  out_arcs.reserve(chains.size());
  for (std::size_t i = 0; i < chains.size(); ++i) {
    out_arcs.push_back({static_cast<int>(i + 1), chains[i].from, chains[i].to, chains[i].length});
  }
  std::vector<Vertex> out_vertices;
  for (const auto& v : graph.vertices()) {
    if (is_anchor(v.id)) out_vertices.push_back(v);
  }
  return MetricGraph(std::move(out_vertices), std::move(out_arcs));
}

MetricGraph induced_subgraph(const MetricGraph& graph, const std::vector<int>& vertex_ids) {
  std::set<int> keep(vertex_ids.begin(), vertex_ids.end());
  std::vector<Vertex> vertices;
  for (const auto& v : graph.vertices()) {
    if (keep.contains(v.id)) vertices.push_back(v);
  }
  std::vector<Arc> arcs;
  for (const auto& a : graph.arcs()) {
    if (keep.contains(a.from) && keep.contains(a.to)) arcs.push_back(a);
  }
  return MetricGraph(std::move(vertices), std::move(arcs));
}

MetricGraph renumber_arcs(const MetricGraph& graph) {
  auto arcs = graph.arcs();
  for (std::size_t j = 0; j < arcs.size(); ++j) arcs[j].id = static_cast<int>(j + 1);
  return MetricGraph(graph.vertices(), std::move(arcs));
}

}  // namespace qgraph
