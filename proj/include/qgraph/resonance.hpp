#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

enum class ShapeKind { kCycle, kPumpkin, kLeaves };

std::string to_string(ShapeKind kind);
ShapeKind shape_from_string(const std::string& name);

// Resonance conditions satisfied by a set of arcs:
//   cycle:   l_j / n_j equal, sum of n_j even
//   pumpkin: l_j / n_j equal, all n_j of one parity
//   leaves:  l_j / o_j equal with o_j odd
// For cycles and pumpkins k = n_1 pi / l_1; for leaves k = o_1 pi / (2 l_1).
struct ResonanceSpec {
  ShapeKind kind = ShapeKind::kCycle;
  std::vector<int> arc_ids;  // empty when checked from bare lengths
  std::vector<int> integers;
  double k = 0.0;

  // Dimension of the localized eigenspace: 1 for a cycle, p - 1 otherwise.
  std::size_t multiplicity() const;
};

struct CheckOptions {
  int n_max = 64;
  double rel_tol = 1e-9;
};

// Smallest admissible integer tuple, or nullopt when none exists with every
// integer <= n_max. Two lengths passed to check_cycle are treated as a pumpkin.
std::optional<ResonanceSpec> check_cycle(std::span<const double> lengths, const CheckOptions& options = {});
std::optional<ResonanceSpec> check_pumpkin(std::span<const double> lengths, const CheckOptions& options = {});
std::optional<ResonanceSpec> check_leaves(std::span<const double> lengths, const CheckOptions& options = {});

// Verifies that `arc_ids` form the named shape in `graph`, then checks the
// resonance condition on their lengths. Throws Error(kShapeMismatch).
std::optional<ResonanceSpec> check_shape(const MetricGraph& graph, const std::vector<int>& arc_ids, ShapeKind kind,
                                         const CheckOptions& options = {});

// Exact localized eigenvectors: B_j = 0 on active arcs (sin pattern from each
// arc's origin), zero on every other arc. Cycles give one mode; pumpkins and
// leaf stars give the p - 1 two-arc modes e_1 - e_i, each of unit graph norm.
// Those span the eigenspace but are not mutually orthogonal, so
// `Eigenpair::modes` is a basis here, not an orthonormal one.
// Throws Error(kShapeMismatch) or Error(kNotResonant) (residual >= 1e-10).
Eigenpair construct_mode(const MetricGraph& graph, const ResonanceSpec& spec);

// Sets every listed arc to n_j pi / k_target with n_j nearest to
// k_target l_j / pi, repairing parity by the single +-1 change that moves a
// length the least. Arcs already resonant keep their exact length.
std::pair<MetricGraph, ResonanceSpec> tune_lengths(const MetricGraph& graph, const std::vector<int>& arc_ids,
                                                   ShapeKind kind, double k_target);

struct CompositeMode {
  MetricGraph graph;  // input graph with glue.second merged into glue.first
  Eigenpair pair;
  std::vector<int> active_arcs;
};

// Identifies two vertices of two disjoint localized structures resonating at
// the same k and returns the union eigenvector (equal amplitude on every
// active arc). Throws Error(kKMismatch) for different frequencies and
// Error(kShapeMismatch) if an arc outside both structures would leave an
// unbalanced flux at an active vertex.
CompositeMode join_composite(const ResonanceSpec& spec_a, const ResonanceSpec& spec_b, const MetricGraph& graph,
                             std::pair<int, int> glue);

enum class NonexistenceConfig { kSingleArc, kLeaf, kTwoConnectedArcs, kDegree3Star };

std::string to_string(NonexistenceConfig config);
NonexistenceConfig nonexistence_from_string(const std::string& name);
std::size_t expected_arc_count(NonexistenceConfig config);

struct Certificate {
  NonexistenceConfig config;
  Eigen::MatrixXd system;  // localization constraints on (A_1, B_1, ...)
  Eigen::VectorXd singular_values;
  int rank = 0;
  int unknowns = 0;

  bool full_rank() const { return rank == unknowns; }
  std::string summary() const;
};

// Builds the constraint system for "vanishes at every vertex and balances
// every flux using only these arcs" and reports its numerical rank.
Certificate certify_nonexistence(NonexistenceConfig config, std::span<const double> lengths, double k);

}  // namespace qgraph
