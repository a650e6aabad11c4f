#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/spectral.hpp"

using namespace qgraph;
using fixture::kPi;

namespace {

double sigma_min(const MetricGraph& g, double k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(assemble_secular(g, k).entries);
  return svd.singularValues().tail(1)[0];
}

ModeCoefficients random_mode(std::mt19937_64& rng, std::size_t m, double k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModeCoefficients v{k, Eigen::VectorXd(static_cast<Eigen::Index>(2 * m))};
  for (Eigen::Index i = 0; i < v.amps.size(); ++i) v.amps[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("secular matrix of a Neumann interval") {
  auto m = assemble_secular(fixture::interval(kPi), 1.0);
  REQUIRE(m.entries.rows() == 2);
  // Kirchhoff at each end: k A and -k(A cos kl - B sin kl).
  CHECK(m.entries(0, 0) == doctest::Approx(1.0));
  CHECK(m.entries(0, 1) == doctest::Approx(0.0));
  CHECK(m.entries(1, 0) == doctest::Approx(1.0));
  CHECK(std::abs(m.entries(1, 1)) < 1e-15);
  CHECK(sigma_min(fixture::interval(kPi), 1.0) < 1e-12);
  auto pair = extract_modes(fixture::interval(kPi), 1.0);
  REQUIRE(pair.multiplicity() == 1);
  CHECK(std::abs(pair.modes[0].a(0)) < 1e-12);
  CHECK(pair.modes[0].b(0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
}

TEST_CASE("secular matrix shape and row map") {
  auto g = load_g14();
  auto m = assemble_secular(g, 0.7);
  CHECK(m.entries.rows() == 28);
  CHECK(m.entries.cols() == 28);
  CHECK(m.row_map.size() == 28);
  int kirchhoff = 0;
  for (const auto& r : m.row_map) kirchhoff += r.kind == RowKind::kKirchhoff;
  CHECK(kirchhoff == static_cast<int>(g.vertex_count()));
  CHECK_THROWS_AS(assemble_secular(g, 0.0), Error);
  try {
    assemble_secular(g, -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidK);
  }
}

TEST_CASE("unit-flux scaling leaves the null space unchanged") {
  auto g = fixture::k4();
  const double k = std::acos(-1.0 / 3.0);
  auto plain = assemble_secular(g, k).entries;
  auto scaled = assemble_secular(g, k, true).entries;
  auto pair = extract_modes(g, k);
  for (const auto& v : pair.modes) {
    CHECK((plain * v.amps).norm() < 1e-10);
    CHECK((scaled * v.amps).norm() < 1e-10);
  }
}

TEST_CASE("bare equilateral triangle behaves as a circle of length 3") {
  // Degree-2 vertices impose nothing, so the spectrum is 2 pi n / 3.
  auto tri = MetricGraph({{1}, {2}, {3}}, {{1, 1, 2, 1.0}, {2, 2, 3, 1.0}, {3, 3, 1, 1.0}});
  CHECK(sigma_min(tri, 2 * kPi / 3) < 1e-10);
  CHECK(sigma_min(tri, 4 * kPi / 3) < 1e-10);
  CHECK(sigma_min(tri, kPi) > 1e-3);
}

TEST_CASE("interval spectrum") {
  for (double l : {kPi, 1.0, 2.7}) {
    ScanOptions o;
    o.k_min = 0.3;
    o.k_max = 12.0;
    auto s = scan_spectrum(fixture::interval(l), o);
    auto expect = oracle::interval_spectrum(l, o.k_min, o.k_max);
    REQUIRE(s.pairs.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(std::abs(s.pairs[i].k - expect[i]) < 1e-9);
      CHECK(s.pairs[i].multiplicity() == 1);
    }
  }
}

TEST_CASE("constant mode is prepended at k_min = 0") {
  ScanOptions o;
  o.k_max = 1.5;
  auto s = scan_spectrum(fixture::interval(kPi), o);
  REQUIRE(s.pairs.size() == 2);
  CHECK(s.pairs[0].k == 0.0);
  CHECK(graph_norm(s.pairs[0].modes[0], fixture::interval(kPi)) == doctest::Approx(1.0));
  CHECK(std::abs(s.pairs[1].k - 1.0) < 1e-9);
}

TEST_CASE("empty range is a valid empty result") {
  ScanOptions o;
  o.k_min = 1.1;
  o.k_max = 1.9;
  auto s = scan_spectrum(fixture::interval(kPi), o);
  CHECK_FALSE(s.found());
}

TEST_CASE("star of equal leaves: multiplicities from cos(kl) = 0 and sin(kl) = 0") {
  // Leaves of length 1: cos k = 0 gives p - 1 modes, sin k = 0 gives one.
  auto g = fixture::star({1.0, 1.0, 1.0, 1.0});
  ScanOptions o;
  o.k_min = 0.5;
  o.k_max = 5.0;
  auto s = scan_spectrum(g, o);
  REQUIRE(s.pairs.size() == 3);
  CHECK(std::abs(s.pairs[0].k - kPi / 2) < 1e-9);
  CHECK(s.pairs[0].multiplicity() == 3);
  CHECK(std::abs(s.pairs[1].k - kPi) < 1e-9);
  CHECK(s.pairs[1].multiplicity() == 1);
  CHECK(std::abs(s.pairs[2].k - 3 * kPi / 2) < 1e-9);
  CHECK(s.pairs[2].multiplicity() == 3);
}

TEST_CASE("equilateral K4: cos k = -1/3 has multiplicity 3") {
  // For an equilateral graph, k off the Dirichlet set solves cos(kl) = mu
  // with mu an eigenvalue of D^-1 A; for K4 mu = -1/3 three times.
  auto g = fixture::k4();
  ScanOptions o;
  o.k_min = 0.5;
  o.k_max = 3.5;
  auto s = scan_spectrum(g, o);
  REQUIRE(s.pairs.size() == 2);
  CHECK(std::abs(s.pairs[0].k - std::acos(-1.0 / 3.0)) < 1e-9);
  CHECK(s.pairs[0].multiplicity() == 3);
  // k = pi on a non-bipartite graph: m - n = 2.
  CHECK(std::abs(s.pairs[1].k - kPi) < 1e-9);
  CHECK(s.pairs[1].multiplicity() == 2);
}

TEST_CASE("G14 spectrum contains the published values") {
  ScanOptions o;
  o.k_max = 1.4;
  auto s = scan_spectrum(load_g14(), o);
  for (double k : {0.2347645148, 0.4657835674, 0.480197067, 0.8078723081, 1.3322287766, 1.379308786}) {
    bool hit = false;
    for (const auto& p : s.pairs) hit = hit || std::abs(p.k - k) < 1e-6;
    CHECK_MESSAGE(hit, "missing k = " << k);
  }
}

TEST_CASE("host graph with a resonant 2-pumpkin has k = 1") {
  auto g = fixture::pumpkin_host({kPi, 3 * kPi}, 1.3, 0.7);
  ScanOptions o;
  o.k_min = 0.9;
  o.k_max = 1.1;
  auto s = scan_spectrum(g, o);
  bool hit = false;
  for (const auto& p : s.pairs) hit = hit || std::abs(p.k - 1.0) < 1e-9;
  CHECK(hit);
}

TEST_CASE("3-pumpkin (pi, 3pi, 5pi) in a host has a double eigenvalue at 1") {
  auto g = fixture::pumpkin_host({kPi, 3 * kPi, 5 * kPi});
  auto pair = extract_modes(g, 1.0);
  CHECK(pair.multiplicity() == 2);
  CHECK(std::abs(inner_product(pair.modes[0], pair.modes[1], g)) < 1e-10);
}

TEST_CASE("extract_modes rejects non-resonant k") {
  try {
    extract_modes(fixture::interval(kPi), 1.5);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotResonant);
  }
}

TEST_CASE("edge norm closed form") {
  CHECK(edge_norm_closed_form(1.0, 0.0, 1.0, kPi) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(edge_norm_closed_form(0.0, 1.0, 1.0, 2 * kPi) == doctest::Approx(kPi).epsilon(1e-14));
  const double q = oracle::trapezoid_power(0.3, -0.7, 1.1, 2.4, 2, 1'000'000);
  CHECK(std::abs(edge_norm_closed_form(0.3, -0.7, 1.1, 2.4) - q) < 1e-8 * q);
  CHECK_THROWS_AS(edge_norm_closed_form(1, 1, 0.0, 1.0), Error);
  CHECK_THROWS_AS(edge_norm_closed_form(1, 1, 1.0, -1.0), Error);
}

TEST_CASE("edge norm matches quadrature on random inputs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ab(-1.0, 1.0), kk(0.1, 10.0), ll(0.1, 20.0);
  for (int i = 0; i < 40; ++i) {
    const double a = ab(rng), b = ab(rng), k = kk(rng), l = ll(rng);
    const double q = oracle::trapezoid_power(a, b, k, l, 2, 200'000);
    CHECK(std::abs(edge_norm_closed_form(a, b, k, l) - q) <= 1e-7 * q);
  }
}

TEST_CASE("inner product") {
  auto g = load_g14();
  std::mt19937_64 rng(5);
  auto v = random_mode(rng, g.arc_count(), 0.9);
  auto w = random_mode(rng, g.arc_count(), 1.3);

  SUBCASE("self product is the sum of edge norms") {
    double sum = 0.0;
    for (std::size_t j = 0; j < g.arc_count(); ++j) sum += edge_norm_closed_form(v.a(j), v.b(j), v.k, g.arc(j).length);
    CHECK(inner_product(v, v, g) == doctest::Approx(sum).epsilon(1e-13));
  }
  SUBCASE("symmetric") { CHECK(inner_product(v, w, g) == doctest::Approx(inner_product(w, v, g)).epsilon(1e-14)); }
  SUBCASE("matches quadrature for different k") {
    double q = 0.0;
    for (std::size_t j = 0; j < g.arc_count(); ++j) {
      q += oracle::simpson([&](double x) { return v.value(j, x) * w.value(j, x); }, 0.0, g.arc(j).length, 20000);
    }
    CHECK(std::abs(inner_product(v, w, g) - q) < 1e-8);
  }
  SUBCASE("nearly equal frequencies do not lose accuracy") {
    auto w2 = w;
    w2.k = v.k * (1.0 + 1e-13);
    double q = 0.0;
    for (std::size_t j = 0; j < g.arc_count(); ++j) {
      q += oracle::simpson([&](double x) { return v.value(j, x) * w2.value(j, x); }, 0.0, g.arc(j).length, 20000);
    }
    CHECK(std::abs(inner_product(v, w2, g) - q) < 1e-8);
  }
  SUBCASE("arc-count mismatch") {
    ModeCoefficients short_mode{1.0, Eigen::VectorXd::Zero(4)};
    CHECK_THROWS_AS(inner_product(v, short_mode, g), Error);
  }
}

TEST_CASE("interval modes at k = 1 and k = 2 are orthogonal") {
  auto g = fixture::interval(kPi);
  auto a = extract_modes(g, 1.0), b = extract_modes(g, 2.0);
  CHECK(std::abs(inner_product(a.modes[0], b.modes[0], g)) < 1e-12);
}

TEST_CASE("scan properties on G14") {
  auto g = load_g14();
  ScanOptions o;
  o.k_max = 2.0;
  auto s = scan_spectrum(g, o);
  for (std::size_t p = 0; p < s.pairs.size(); ++p) {
    CHECK(s.pairs[p].residual <= o.tol);
    for (const auto& v : s.pairs[p].modes) {
      CHECK(mode_residual(g, v) < o.tol);
      CHECK(graph_norm(v, g) == doctest::Approx(1.0).epsilon(1e-10));
    }
    if (p > 0) CHECK(s.pairs[p].k > s.pairs[p - 1].k);
    for (std::size_t q = 0; q < p; ++q) {
      CHECK(std::abs(inner_product(s.pairs[p].modes[0], s.pairs[q].modes[0], g)) < 1e-6);
    }
  }
}

TEST_CASE("smallest singular value is Lipschitz on the grid") {
  auto g = load_g14();
  const double h = default_grid_step(g);
  double max_jump = 0.0, prev = secular_singular_values(g, 0.05).smallest;
  for (double k = 0.05 + h; k < 1.5; k += h) {
    const double cur = secular_singular_values(g, k).smallest;
    max_jump = std::max(max_jump, std::abs(cur - prev));
    prev = cur;
  }
  // Entries are trigonometric in k l_j; their derivative is bounded by max l.
  double lmax = 0.0;
  for (const auto& a : g.arcs()) lmax = std::max(lmax, a.length);
  CHECK(max_jump <= 2.0 * lmax * h);
}

TEST_CASE("scan is deterministic across thread counts") {
  auto g = load_g14();
  ScanOptions a, b;
  a.k_max = b.k_max = 1.0;
  a.threads = 1;
  b.threads = 4;
  auto sa = scan_spectrum(g, a), sb = scan_spectrum(g, b);
  REQUIRE(sa.pairs.size() == sb.pairs.size());
  for (std::size_t i = 0; i < sa.pairs.size(); ++i) CHECK(sa.pairs[i].k == sb.pairs[i].k);
}
