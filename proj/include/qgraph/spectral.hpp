#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

// Per-arc harmonic coefficients: v_j(x) = A_j sin(kx) + B_j cos(kx), stored
// interleaved as (A_1, B_1, ..., A_m, B_m).
struct ModeCoefficients {
  double k = 0.0;
  Eigen::VectorXd amps;

  std::size_t arc_count() const { return static_cast<std::size_t>(amps.size() / 2); }
  double a(std::size_t j) const { return amps[2 * j]; }
  double b(std::size_t j) const { return amps[2 * j + 1]; }

  // Field value on arc position j at local coordinate x.
  double value(std::size_t j, double x) const;
};

struct Eigenpair {
  double k = 0.0;
  std::vector<ModeCoefficients> modes;  // orthonormal in the graph inner product
  double residual = 0.0;                // relative smallest singular value of M(k)

  std::size_t multiplicity() const { return modes.size(); }
};

enum class RowKind { kContinuity, kKirchhoff };

struct SecularRow {
  int vertex_id = 0;
  RowKind kind = RowKind::kContinuity;
  ArcEnd reference;  // continuity rows: lowest-indexed incident end
  ArcEnd other;      // continuity rows: the end compared against it
};

struct SecularMatrix {
  double k = 0.0;
  Eigen::MatrixXd entries;
  std::vector<SecularRow> row_map;
};

// Vertex-condition matrix acting on (A_1, B_1, ..., A_m, B_m). Each vertex of
// degree d contributes d-1 continuity rows and one Kirchhoff row. With
// `unit_flux` the Kirchhoff rows are divided by k, which leaves the null space
// unchanged and keeps the rows comparable in size when k is small.
SecularMatrix assemble_secular(const MetricGraph& graph, double k, bool unit_flux = false);

struct SingularSpectrum {
  double smallest = 0.0;
  double largest = 0.0;
  double relative() const { return largest > 0.0 ? smallest / largest : 0.0; }
};

// Sign of det M(k) from an LU factorization (no magnitude, so no overflow);
// 0 only for an exactly singular pivot.
int secular_determinant_sign(const MetricGraph& graph, double k);

// Extreme singular values of the flux-normalized secular matrix.
SingularSpectrum secular_singular_values(const MetricGraph& graph, double k);

struct ScanOptions {
  double k_min = 0.0;
  double k_max = 1.0;
  std::optional<double> grid_step;  // default: pi / (20 sum_j l_j)
  double tol = 1e-8;                // relative to the largest singular value
  int threads = 0;                  // 0: hardware concurrency
};

struct Spectrum {
  std::vector<Eigenpair> pairs;  // ascending in k
  double grid_step = 0.0;

  // False is the NO_EIGENVALUES outcome: a valid, empty result.
  bool found() const { return !pairs.empty(); }
};

double default_grid_step(const MetricGraph& graph);

// Grid scan of the relative smallest singular value, golden-section
// refinement of every local minimum, and null-space extraction at each
// accepted root. With k_min == 0 the constant mode is prepended.
Spectrum scan_spectrum(const MetricGraph& graph, const ScanOptions& options);

// Null space of M(k) from a full SVD, orthonormalized in the graph inner
// product. Throws Error(kNotResonant) when the relative smallest singular
// value is not below tol.
Eigenpair extract_modes(const MetricGraph& graph, double k, double tol = 1e-8);

// The normalized constant eigenvector at k = 0.
Eigenpair constant_mode(const MetricGraph& graph);

// \int_0^l (A sin kx + B cos kx)^2 dx in closed form.
double edge_norm_closed_form(double a, double b, double k, double l);

// \int_0^l v(x) w(x) dx for two harmonics with possibly different k.
double edge_inner_product(double a1, double b1, double k1, double a2, double b2, double k2, double l);

// Graph inner product: sum over arcs of the L2 product on [0, l_j].
double inner_product(const ModeCoefficients& v, const ModeCoefficients& w, const MetricGraph& graph);

double graph_norm(const ModeCoefficients& v, const MetricGraph& graph);

// ||M(k) X|| / ||X|| using the flux-normalized matrix.
double mode_residual(const MetricGraph& graph, const ModeCoefficients& mode);

}  // namespace qgraph
