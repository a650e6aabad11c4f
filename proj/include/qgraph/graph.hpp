#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qgraph {

struct Vertex {
  int id = 0;
  std::optional<double> x;
  std::optional<double> y;
};

// Oriented arc parameterized by x in [0, length]; x = 0 sits at `from`.
struct Arc {
  int id = 0;
  int from = 0;
  int to = 0;
  double length = 0.0;
};

enum class End { kOrigin, kTerminal };

// One end of an arc, addressed by arc position (not id).
struct ArcEnd {
  std::size_t arc = 0;
  End end = End::kOrigin;

  friend bool operator==(const ArcEnd&, const ArcEnd&) = default;
};

// A finite metric graph. Arcs are kept sorted by id so that position j in
// every coefficient vector corresponds to the j-th smallest arc id. The
// constructor never throws; structural problems are reported by validate().
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Vertex> vertices, std::vector<Arc> arcs);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }

  const Arc& arc(std::size_t index) const { return arcs_.at(index); }
  std::optional<std::size_t> arc_index(int arc_id) const;
  std::optional<std::size_t> vertex_index(int vertex_id) const;

  // Arc ends meeting at a vertex, ordered by arc position with the origin end
  // of a self-loop before its terminal end.
  const std::vector<ArcEnd>& incident(int vertex_id) const;
  std::size_t degree(int vertex_id) const { return incident(vertex_id).size(); }

  int end_vertex(ArcEnd end) const;
  double total_length() const;

  // Copy with one arc length replaced.
  MetricGraph with_length(int arc_id, double length) const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcEnd>> incidence_;  // parallel to vertices_
};

enum class IssueCode {
  kEmptyGraph,
  kDuplicateVertexId,
  kDuplicateArcId,
  kDanglingEndpoint,
  kNonpositiveLength,
  kDegreeTwoVertex,
  kDisconnected,
};

std::string to_string(IssueCode code);

struct ValidationIssue {
  IssueCode code;
  std::string message;
  int element_id = 0;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(IssueCode code) const;
};

struct ValidateOptions {
  bool require_connected = true;
  bool allow_degree_two = false;
};

ValidationReport validate(const MetricGraph& graph, const ValidateOptions& options = {});

// Throws Error(kInvalidArgs) listing the issues when validate() fails.
void require_valid(const MetricGraph& graph, const ValidateOptions& options = {});

// Vertex ids grouped by connected component, components ordered by their
// smallest vertex position. Dangling arc endpoints are ignored.
std::vector<std::vector<int>> connected_components(const MetricGraph& graph);

// Replaces every maximal chain through degree-2 vertices by a single arc
// carrying the summed length. Arcs that touch no degree-2 vertex keep their
// orientation; output arcs are renumbered 1..m in order of the smallest
// original id they absorb.
MetricGraph merge_degree_two(const MetricGraph& graph);

// Subgraph induced by the listed vertices; arc ids are preserved.
MetricGraph induced_subgraph(const MetricGraph& graph, const std::vector<int>& vertex_ids);

// Renumbers arcs 1..m in their current order.
MetricGraph renumber_arcs(const MetricGraph& graph);

}  // namespace qgraph
