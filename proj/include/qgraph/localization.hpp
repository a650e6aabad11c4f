#pragma once

#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

// Colour bands for per-edge L2 ratios: [0, 0.06), [0.06, 0.12), [0.12, 0.2), [0.2, 1].
enum class Band { kBand0, kBand1, kBand2, kBand3 };

std::string to_string(Band band);
Band classify_band(double ratio);

struct LocalizationReport {
  int q = 0;
  double k = 0.0;
  std::vector<double> ratios;     // e_q(j): share of the squared graph norm on arc j
  std::vector<double> densities;  // E_q^j: length-normalized shares
  double criterion = 0.0;         // max_j E_q^j; 1/criterion ~ number of active arcs
  double ipr = 0.0;
  std::vector<Band> bands;

  // One dominant edge (ratio >= 0.5) and every other edge below 0.05.
  bool approximately_localized() const;
  // Arc ids whose density exceeds `threshold`.
  std::vector<int> active_arcs(const MetricGraph& graph, double threshold = 1e-6) const;
};

// Squared L2 norm of the mode restricted to each arc.
std::vector<double> edge_norms(const ModeCoefficients& mode, const MetricGraph& graph);

std::vector<double> edge_energy_ratio(const ModeCoefficients& mode, const MetricGraph& graph);

struct CriterionResult {
  double criterion = 0.0;
  std::vector<double> densities;
};
CriterionResult localization_criterion(const ModeCoefficients& mode, const MetricGraph& graph);

// \int_0^l (A sin kx + B cos kx)^4 dx in closed form.
double edge_quartic_integral(double a, double b, double k, double l);

double ipr(const ModeCoefficients& mode, const MetricGraph& graph);

std::vector<Band> classify_bands(const LocalizationReport& report);

LocalizationReport localization_report(int q, const ModeCoefficients& mode, const MetricGraph& graph);

}  // namespace qgraph
