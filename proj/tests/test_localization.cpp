#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/localization.hpp"
#include "qgraph/resonance.hpp"
#include "qgraph/spectral.hpp"

using namespace qgraph;
using fixture::kPi;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// sin x on the first three arcs of a triangle host, zero elsewhere.
ModeCoefficients triangle_sine(std::size_t m) {
  ModeCoefficients v{1.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * m))};
  for (int j = 0; j < 3; ++j) v.amps[2 * j] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("edge ratios of the triangle sine follow the lengths") {
  auto g = fixture::triangle_host(2 * kPi, 3 * kPi, 7 * kPi);
  auto e = edge_energy_ratio(triangle_sine(g.arc_count()), g);
  CHECK(e[0] == doctest::Approx(2.0 / 12).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(3.0 / 12).epsilon(1e-12));
  CHECK(e[2] == doctest::Approx(7.0 / 12).epsilon(1e-12));
  for (std::size_t j = 3; j < e.size(); ++j) CHECK(e[j] == 0.0);
}

TEST_CASE("mode on one arc has ratio one there") {
  auto g = load_g14();
  ModeCoefficients v{0.8, Eigen::VectorXd::Zero(28)};
  v.amps[2 * 4] = 0.3;
  v.amps[2 * 4 + 1] = -1.2;
  auto e = edge_energy_ratio(v, g);
  CHECK(e[4] == doctest::Approx(1.0));
  CHECK(sum(e) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero mode is rejected") {
  auto g = load_g14();
  ModeCoefficients v{0.8, Eigen::VectorXd::Zero(28)};
  try {
    edge_energy_ratio(v, g);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroMode);
  }
  CHECK_THROWS_AS(localization_criterion(v, g), Error);
  CHECK_THROWS_AS(ipr(v, g), Error);
}

TEST_CASE("criterion of exactly localized shapes") {
  SUBCASE("triangle") {
    auto g = fixture::triangle_host(2 * kPi, 3 * kPi, 7 * kPi);
    auto c = localization_criterion(triangle_sine(g.arc_count()), g);
    CHECK(c.criterion == doctest::Approx(1.0 / 3).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) CHECK(c.densities[j] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("two leaves") {
    auto g = fixture::star({kPi / 2, 3 * kPi / 2, 2.2});
    auto spec = check_shape(g, {1, 2}, ShapeKind::kLeaves);
    REQUIRE(spec);
    auto pair = construct_mode(g, *spec);
    CHECK(localization_criterion(pair.modes[0], g).criterion == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ipr(pair.modes[0], g) == doctest::Approx(3.0 / (2 * 2 * kPi)).epsilon(1e-12));
  }
  SUBCASE("quadrilateral") {
    auto g = load_g14();
    for (auto [id, l] : {std::pair{5, 2 * kPi}, {7, 3 * kPi}, {8, 5 * kPi}, {9, 6 * kPi}}) g = g.with_length(id, l);
    auto spec = check_shape(g, {5, 7, 8, 9}, ShapeKind::kCycle);
    REQUIRE(spec);
    auto pair = construct_mode(g, *spec);
    CHECK(localization_criterion(pair.modes[0], g).criterion == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("ipr closed forms") {
  auto g = fixture::triangle_host(2 * kPi, 3 * kPi, 7 * kPi);
  CHECK(ipr(triangle_sine(g.arc_count()), g) == doctest::Approx(3.0 / (2 * 12 * kPi)).epsilon(1e-12));
  auto c = constant_mode(load_g14());
  CHECK(ipr(c.modes[0], load_g14()) == doctest::Approx(1.0 / load_g14().total_length()).epsilon(1e-12));
}

TEST_CASE("quartic integral matches quadrature") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ab(-1.0, 1.0), kk(0.01, 10.0), ll(0.05, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double a = ab(rng), b = ab(rng), k = kk(rng), l = ll(rng);
    const double q = oracle::trapezoid_power(a, b, k, l, 4, 100'000);
    CHECK(std::abs(edge_quartic_integral(a, b, k, l) - q) <= 1e-8 * std::max(q, 1e-3));
  }
  CHECK(edge_quartic_integral(0.0, 2.0, 0.0, 3.0) == doctest::Approx(48.0));
}

TEST_CASE("bands are half-open and lower-inclusive") {
  CHECK(classify_band(0.05) == Band::kBand0);
  CHECK(classify_band(0.06) == Band::kBand1);
  CHECK(classify_band(0.119999) == Band::kBand1);
  CHECK(classify_band(0.12) == Band::kBand2);
  CHECK(classify_band(0.2) == Band::kBand3);
  CHECK(classify_band(0.58) == Band::kBand3);
  CHECK(to_string(Band::kBand2) == "band2");
}

TEST_CASE("report invariants on every G14 mode") {
  auto g = load_g14();
  ScanOptions o;
  o.k_max = 1.4;
  auto s = scan_spectrum(g, o);
  int q = 1;
  for (const auto& p : s.pairs) {
    auto r = localization_report(q, p.modes[0], g);
    CHECK(sum(r.ratios) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sum(r.densities) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.criterion == *std::max_element(r.densities.begin(), r.densities.end()));
    CHECK(r.criterion > 0.0);
    CHECK(r.criterion <= 1.0);
    CHECK(r.ipr > 0.0);
    CHECK(r.bands == classify_bands(r));

    auto scaled = p.modes[0];
    scaled.amps *= -3.7;
    auto r2 = localization_report(q, scaled, g);
    for (std::size_t j = 0; j < r.ratios.size(); ++j) {
      CHECK(r2.ratios[j] == doctest::Approx(r.ratios[j]).epsilon(1e-12));
      CHECK(r2.densities[j] == doctest::Approx(r.densities[j]).epsilon(1e-12));
    }
    ++q;
  }
}

TEST_CASE("G14 q = 2 has a dominant edge") {
  auto g = load_g14();
  ScanOptions o;
  o.k_max = 0.25;
  auto s = scan_spectrum(g, o);
  REQUIRE(s.pairs.size() >= 2);
  auto r = localization_report(2, s.pairs[1].modes[0], g);
  int big = 0;
  for (double e : r.ratios) big += e >= 0.5;
  CHECK(big >= 1);
  CHECK(big <= 2);
}

TEST_CASE("approximately localized flag") {
  LocalizationReport r;
  r.ratios = {0.6, 0.04, 0.36};
  CHECK_FALSE(r.approximately_localized());
  r.ratios = {0.91, 0.04, 0.05 - 1e-9};
  CHECK(r.approximately_localized());
}
