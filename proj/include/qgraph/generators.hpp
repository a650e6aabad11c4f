#pragma once

#include <cstdint>

#include "qgraph/graph.hpp"

namespace qgraph {

// Distribution of needle lengths.
struct LengthLaw {
  enum class Kind { kFixed, kUniform };
  Kind kind = Kind::kFixed;
  double a = 1.0;  // fixed length, or lower bound for kUniform
  double b = 1.0;  // upper bound for kUniform

  static LengthLaw fixed(double length) { return {Kind::kFixed, length, length}; }
  static LengthLaw uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
};

struct BuffonOptions {
  int needle_count = 200;
  double box_side = 8.0;
  LengthLaw length_law = LengthLaw::fixed(1.0);
  std::uint64_t seed = 0;
  // Leaf arcs shorter than this are removed (repeatedly, re-merging after
  // each pass). Zero keeps every leaf.
  double trim_epsilon = 0.0;
};

// Random needle graph: segments dropped uniformly in a square, split at their
// pairwise crossings, reduced to the largest connected component and
// normalized. Vertices carry planar coordinates. Deterministic in `seed`.
// Throws Error(kEmptyGraph) if no two needles cross.
MetricGraph generate_buffon(const BuffonOptions& options);

// The 14-arc graph obtained from the IEEE 14-bus network by eliminating its
// degree-2 buses, with the published arc lengths. Vertex 6 is the only leaf.
MetricGraph load_g14();

}  // namespace qgraph
