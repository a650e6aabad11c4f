#include "qgraph/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr double kZeroModeNorm = 1e-14;

double checked_total(const std::vector<double>& norms) {
  const double total = std::accumulate(norms.begin(), norms.end(), 0.0);
  if (!(total >= kZeroModeNorm)) throw Error(ErrorCode::kZeroMode, "mode has vanishing graph norm");
  return total;
}

// Antiderivative of sin^4(t).
double sin4_primitive(double t) { return 3.0 * t / 8.0 - std::sin(2.0 * t) / 4.0 + std::sin(4.0 * t) / 32.0; }

}  // namespace

std::string to_string(Band band) {
  switch (band) {
    case Band::kBand0: return "band0";
    case Band::kBand1: return "band1";
    case Band::kBand2: return "band2";
    case Band::kBand3: return "band3";
  }
  return "band0";
}

Band classify_band(double ratio) {
  if (ratio < 0.06) return Band::kBand0;
  if (ratio < 0.12) return Band::kBand1;
  if (ratio < 0.2) return Band::kBand2;
  return Band::kBand3;
}

std::vector<double> edge_norms(const ModeCoefficients& mode, const MetricGraph& graph) {
  const auto m = graph.arc_count();
  if (mode.arc_count() != m) throw Error(ErrorCode::kGraphMismatch, "mode and graph arc counts differ");
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double l = graph.arc(j).length;
    out[j] = std::max(0.0, edge_inner_product(mode.a(j), mode.b(j), mode.k, mode.a(j), mode.b(j), mode.k, l));
  }
  return out;
}

std::vector<double> edge_energy_ratio(const ModeCoefficients& mode, const MetricGraph& graph) {
  auto norms = edge_norms(mode, graph);
  const double total = checked_total(norms);
  for (auto& n : norms) n /= total;
  return norms;
}

CriterionResult localization_criterion(const ModeCoefficients& mode, const MetricGraph& graph) {
  auto norms = edge_norms(mode, graph);
  checked_total(norms);
  for (std::size_t j = 0; j < norms.size(); ++j) norms[j] /= graph.arc(j).length;
  const double total = std::accumulate(norms.begin(), norms.end(), 0.0);
  for (auto& n : norms) n /= total;
  return {*std::max_element(norms.begin(), norms.end()), std::move(norms)};
}

double edge_quartic_integral(double a, double b, double k, double l) {
  // v = r sin(kx + phi) with r^2 = a^2 + b^2, phi = atan2(b, a).
  const double r2 = a * a + b * b;
  if (r2 == 0.0) return 0.0;
  if (k * l < 0.5) {
    // The closed form cancels badly for short arcs; eight-point
    // Gauss-Legendre is exact to degree 15 and the Taylor tail is negligible.
    static constexpr double kNodes[] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                        0.9602898564975363};
    static constexpr double kWeights[] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                          0.1012285362903763};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double x = 0.5 * l * (1.0 + sgn * kNodes[i]);
        const double v = a * std::sin(k * x) + b * std::cos(k * x);
        sum += kWeights[i] * v * v * v * v;
      }
    }
    return 0.5 * l * sum;
  }
  const double phi = std::atan2(b, a);
  return r2 * r2 * (sin4_primitive(k * l + phi) - sin4_primitive(phi)) / k;
}

double ipr(const ModeCoefficients& mode, const MetricGraph& graph) {
  const auto norms = edge_norms(mode, graph);
  const double total = checked_total(norms);
  double quartic = 0.0;
  for (std::size_t j = 0; j < graph.arc_count(); ++j) {
    quartic += edge_quartic_integral(mode.a(j), mode.b(j), mode.k, graph.arc(j).length);
  }
  return quartic / (total * total);
}

std::vector<Band> classify_bands(const LocalizationReport& report) {
  std::vector<Band> out;
  out.reserve(report.ratios.size());
  for (double e : report.ratios) out.push_back(classify_band(e));
  return out;
}

LocalizationReport localization_report(int q, const ModeCoefficients& mode, const MetricGraph& graph) {
  LocalizationReport r;
  r.q = q;
  r.k = mode.k;
  r.ratios = edge_energy_ratio(mode, graph);
  auto crit = localization_criterion(mode, graph);
  r.criterion = crit.criterion;
  r.densities = std::move(crit.densities);
  r.ipr = ipr(mode, graph);
  r.bands = classify_bands(r);
  return r;
}

bool LocalizationReport::approximately_localized() const {
  if (ratios.empty()) return false;
  auto top = std::max_element(ratios.begin(), ratios.end());
  if (*top < 0.5) return false;
  for (auto it = ratios.begin(); it != ratios.end(); ++it) {
    if (it != top && *it >= 0.05) return false;
  }
  return true;
}

std::vector<int> LocalizationReport::active_arcs(const MetricGraph& graph, double threshold) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < densities.size(); ++j) {
    if (densities[j] > threshold) out.push_back(graph.arc(j).id);
  }
  return out;
}

}  // namespace qgraph
