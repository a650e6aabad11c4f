#include "doctest.h"

#include <numeric>

#include "fixtures.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/io.hpp"

using namespace qgraph;

TEST_CASE("validate accepts a single arc") {
  CHECK(validate(fixture::interval(fixture::kPi)).ok());
}

TEST_CASE("validate reports each structural problem") {
  SUBCASE("zero length") {
    auto r = validate(MetricGraph({{1}, {2}}, {{1, 1, 2, 0.0}}));
    CHECK(r.has(IssueCode::kNonpositiveLength));
  }
  SUBCASE("degree two") {
    auto r = validate(MetricGraph({{1}, {2}, {3}}, {{1, 1, 2, 1.0}, {2, 2, 3, 1.0}}));
    CHECK(r.has(IssueCode::kDegreeTwoVertex));
    CHECK(validate(MetricGraph({{1}, {2}, {3}}, {{1, 1, 2, 1.0}, {2, 2, 3, 1.0}}), {true, true}).ok());
  }
  SUBCASE("dangling endpoint") {
    CHECK(validate(MetricGraph({{1}, {2}}, {{1, 1, 7, 1.0}})).has(IssueCode::kDanglingEndpoint));
  }
  SUBCASE("duplicate ids") {
    auto r = validate(MetricGraph({{1}, {1}, {2}}, {{1, 1, 2, 1.0}, {1, 1, 2, 2.0}, {2, 1, 2, 3.0}}));
    CHECK(r.has(IssueCode::kDuplicateVertexId));
    CHECK(r.has(IssueCode::kDuplicateArcId));
  }
  SUBCASE("disconnected") {
    auto g = MetricGraph({{1}, {2}, {3}, {4}}, {{1, 1, 2, 1.0}, {2, 3, 4, 1.0}});
    CHECK(validate(g).has(IssueCode::kDisconnected));
    CHECK(validate(g, {false, false}).ok());
  }
  SUBCASE("empty") { CHECK(validate(MetricGraph()).has(IssueCode::kEmptyGraph)); }
  SUBCASE("ok iff no issues") {
    auto r = validate(MetricGraph({{1}, {2}}, {{1, 1, 2, -1.0}}));
    CHECK(r.ok() == r.issues.empty());
  }
}

TEST_CASE("require_valid throws INVALID_ARGS") {
  try {
    require_valid(MetricGraph({{1}, {2}}, {{1, 1, 2, 0.0}}));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgs);
  }
}

TEST_CASE("incidence ordering and degrees") {
  auto g = MetricGraph({{1}, {2}}, {{2, 1, 2, 1.0}, {1, 1, 1, 2.0}});
  CHECK(g.arc(0).id == 1);  // sorted by id
  const auto& inc = g.incident(1);
  REQUIRE(inc.size() == 3);
  CHECK(inc[0] == ArcEnd{0, End::kOrigin});
  CHECK(inc[1] == ArcEnd{0, End::kTerminal});
  CHECK(inc[2] == ArcEnd{1, End::kOrigin});
  CHECK(g.degree(2) == 1);
  CHECK_THROWS_AS(g.incident(9), Error);
}

TEST_CASE("merge_degree_two examples") {
  SUBCASE("path a-b-c") {
    auto g = merge_degree_two(MetricGraph({{1}, {2}, {3}}, {{1, 1, 2, 1.0}, {2, 2, 3, 2.0}}));
    REQUIRE(g.arc_count() == 1);
    CHECK(g.arc(0).length == doctest::Approx(3.0));
    CHECK(g.vertex_count() == 2);
  }
  SUBCASE("no degree two is identity") {
    auto g = fixture::k4();
    CHECK(merge_degree_two(g) == g);
  }
  SUBCASE("chain of three between degree-3 vertices") {
    // 1 and 5 are degree 3 via two extra leaves each.
    auto g = MetricGraph({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}},
                         {{1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 4, 1.0}, {4, 4, 5, 1.0}, {5, 1, 6, 0.5},
                          {6, 1, 7, 0.5}, {7, 5, 8, 0.5}, {8, 5, 9, 0.5}});
    auto merged = merge_degree_two(g);
    CHECK(merged.arc_count() == 5);
    CHECK(merged.arc(0).length == doctest::Approx(4.0));
    CHECK(validate(merged).ok());
  }
  SUBCASE("pure cycle throws") {
    auto g = MetricGraph({{1}, {2}, {3}}, {{1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 1, 1.0}});
    try {
      merge_degree_two(g);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCycleOfDegreeTwo);
    }
  }
}

TEST_CASE("merge_degree_two is idempotent and preserves length") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    BuffonOptions o;
    o.needle_count = 60;
    o.box_side = 4.0;
    o.seed = seed;
    auto g = generate_buffon(o);
    auto once = merge_degree_two(g);
    CHECK(merge_degree_two(once) == once);
    CHECK(once.total_length() == doctest::Approx(g.total_length()).epsilon(1e-12));
  }
}

TEST_CASE("load_g14 fixture") {
  auto g = load_g14();
  CHECK(g.arc_count() == 14);
  CHECK(g.vertex_count() == 8);
  CHECK(g.arc(0).length == 11.91371443);
  CHECK(g.arc(13).length == 4.472135955);
  CHECK(validate(g).ok());
  int leaves = 0;
  for (const auto& v : g.vertices()) leaves += g.degree(v.id) == 1;
  CHECK(leaves == 1);
  CHECK(g.degree(6) == 1);
}

TEST_CASE("buffon generator") {
  SUBCASE("two crossing needles") {
    BuffonOptions o;
    o.needle_count = 2;
    o.box_side = 0.05;
    o.seed = 3;
    auto g = generate_buffon(o);
    CHECK(g.arc_count() == 4);
    CHECK(g.vertex_count() == 5);
    int center = 0;
    for (const auto& v : g.vertices()) center += g.degree(v.id) == 4;
    CHECK(center == 1);
  }
  SUBCASE("no crossing is EMPTY_GRAPH") {
    BuffonOptions o;
    o.needle_count = 2;
    o.box_side = 1000.0;
    o.length_law = LengthLaw::fixed(0.01);
    try {
      generate_buffon(o);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyGraph);
    }
  }
  SUBCASE("deterministic in the seed") {
    BuffonOptions o;
    o.seed = 11;
    CHECK(generate_buffon(o) == generate_buffon(o));
    auto a = graph_to_json(generate_buffon(o)).dump();
    CHECK(a == graph_to_json(generate_buffon(o)).dump());
  }
  SUBCASE("default size is of the order of a few hundred arcs") {
    BuffonOptions o;
    o.seed = 1;
    auto g = generate_buffon(o);
    CHECK(validate(g).ok());
    CHECK(g.arc_count() > 50);
    CHECK(g.arc_count() < 500);
  }
  SUBCASE("uniform lengths and trimming stay valid") {
    BuffonOptions o;
    o.seed = 5;
    o.length_law = LengthLaw::uniform(0.5, 1.5);
    o.box_side = 6.0;
    o.trim_epsilon = 0.05;
    auto g = generate_buffon(o);
    CHECK(validate(g).ok());
    for (const auto& v : g.vertices()) {
      if (g.degree(v.id) != 1) continue;
      CHECK(g.arc(g.incident(v.id)[0].arc).length >= 0.05);
    }
  }
}

TEST_CASE("graph JSON round trip keeps every bit") {
  BuffonOptions o;
  o.seed = 2;
  auto g = generate_buffon(o);
  auto back = graph_from_json(nlohmann::json::parse(graph_to_json(g).dump()));
  CHECK(back == g);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"arcs": 3})")), Error);
}
