#pragma once

#include <numbers>
#include <vector>

#include "qgraph/graph.hpp"

namespace fixture {

inline constexpr double kPi = std::numbers::pi;

// Single arc 1 -> 2.
inline qgraph::MetricGraph interval(double l) { return qgraph::MetricGraph({{1}, {2}}, {{1, 1, 2, l}}); }

// Center 1, leaves 2..p+1, arc j runs from the center to leaf j+1.
inline qgraph::MetricGraph star(const std::vector<double>& lengths) {
  std::vector<qgraph::Vertex> v{{1}};
  std::vector<qgraph::Arc> a;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    const int id = static_cast<int>(j) + 1;
    v.push_back({id + 1});
    a.push_back({id, 1, id + 1, lengths[j]});
  }
  return {v, a};
}

// Complete graph on four vertices, all arcs of length l.
inline qgraph::MetricGraph k4(double l = 1.0) {
  return qgraph::MetricGraph({{1}, {2}, {3}, {4}},
                             {{1, 1, 2, l}, {2, 1, 3, l}, {3, 1, 4, l}, {4, 2, 3, l}, {5, 2, 4, l}, {6, 3, 4, l}});
}

// Six arcs: triangle 1-2-3 on arcs 1, 2, 3, a chord 4 (1-2), a leaf 5 (3-4)
// and a chord 6 (1-3). Vertex 4 is the only leaf.
inline qgraph::MetricGraph triangle_host(double l1, double l2, double l3, double l4 = 1.9, double l5 = 1.1,
                                         double l6 = 2.6) {
  return qgraph::MetricGraph({{1}, {2}, {3}, {4}},
                             {{1, 1, 2, l1}, {2, 2, 3, l2}, {3, 3, 1, l3}, {4, 1, 2, l4}, {5, 3, 4, l5}, {6, 1, 3, l6}});
}

// Pumpkin between 1 and 2 on arcs 1..p, plus two leaves (arcs p+1 from 1 to
// 3, p+2 from 2 to 4) with the given lengths.
inline qgraph::MetricGraph pumpkin_host(const std::vector<double>& lengths, double leaf_a = 1.3, double leaf_b = 0.7) {
  std::vector<qgraph::Arc> a;
  int id = 1;
  for (double l : lengths) a.push_back({id++, 1, 2, l});
  a.push_back({id++, 1, 3, leaf_a});
  a.push_back({id, 2, 4, leaf_b});
  return qgraph::MetricGraph({{1}, {2}, {3}, {4}}, a);
}

}  // namespace fixture
