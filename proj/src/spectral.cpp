#include "qgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <tuple>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

// Row coefficients (on A_j, B_j) of the field value at an arc end.
std::pair<double, double> value_row(double k, double l, End end) {
  if (end == End::kOrigin) return {0.0, 1.0};
  return {std::sin(k * l), std::cos(k * l)};
}

// Row coefficients of the outgoing derivative at an arc end, divided by k.
std::pair<double, double> flux_row(double k, double l, End end) {
  if (end == End::kOrigin) return {1.0, 0.0};
  return {-std::cos(k * l), std::sin(k * l)};
}

// \int_0^l cos(w x) dx and \int_0^l sin(w x) dx.
double cos_integral(double w, double l) { return w == 0.0 ? l : std::sin(w * l) / w; }
double sin_integral(double w, double l) {
  if (w == 0.0) return 0.0;
  const double s = std::sin(0.5 * w * l);
  return 2.0 * s * s / w;
}

// Per-arc 2x2 Gram blocks of (sin kx, cos kx) on [0, l_j].
Eigen::MatrixXd graph_gram(const MetricGraph& graph, double k) {
  const auto m = graph.arc_count();
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (std::size_t j = 0; j < m; ++j) {
    const double l = graph.arc(j).length;
    n(2 * j, 2 * j) = edge_inner_product(1, 0, k, 1, 0, k, l);
    n(2 * j + 1, 2 * j + 1) = edge_inner_product(0, 1, k, 0, 1, k, l);
    n(2 * j, 2 * j + 1) = n(2 * j + 1, 2 * j) = edge_inner_product(1, 0, k, 0, 1, k, l);
  }
  return n;
}

void canonical_sign(Eigen::VectorXd& x) {
  Eigen::Index idx = 0;
  x.cwiseAbs().maxCoeff(&idx);
  if (x[idx] < 0.0) x = -x;
}

double golden_minimize(const MetricGraph& graph, double lo, double hi, double width) {
  constexpr double kInvPhi = 0.6180339887498949;
  auto f = [&](double k) { return secular_singular_values(graph, k).relative(); };
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    if (c >= d) break;  // interval exhausted at floating resolution
  }
  return fc <= fd ? c : d;
}

double bisect_sign(const MetricGraph& graph, double lo, double hi, double width) {
  int sign_lo = secular_determinant_sign(graph, lo);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int sign_mid = secular_determinant_sign(graph, mid);
    if (sign_mid == 0) return mid;
    if (sign_mid == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Pick the end with the smaller singular value.
  return secular_singular_values(graph, lo).relative() <= secular_singular_values(graph, hi).relative() ? lo : hi;
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

}  // namespace

double ModeCoefficients::value(std::size_t j, double x) const {
  return a(j) * std::sin(k * x) + b(j) * std::cos(k * x);
}

SecularMatrix assemble_secular(const MetricGraph& graph, double k, bool unit_flux) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidK, "k must be positive");
  const auto m = graph.arc_count();
  SecularMatrix out;
  out.k = k;
  out.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * m));
  const double flux_scale = unit_flux ? 1.0 : k;

  Eigen::Index row = 0;
  auto add = [&](Eigen::Index r, ArcEnd e, std::pair<double, double> coeff, double sign) {
    out.entries(r, 2 * e.arc) += sign * coeff.first;
    out.entries(r, 2 * e.arc + 1) += sign * coeff.second;
  };
  for (const auto& v : graph.vertices()) {
    const auto& ends = graph.incident(v.id);
    if (ends.empty()) continue;
    const ArcEnd ref = ends.front();
    for (std::size_t i = 1; i < ends.size(); ++i) {
      if (row >= out.entries.rows()) throw Error(ErrorCode::kInvalidArgs, "graph has more vertex conditions than unknowns");
      add(row, ref, value_row(k, graph.arc(ref.arc).length, ref.end), 1.0);
      add(row, ends[i], value_row(k, graph.arc(ends[i].arc).length, ends[i].end), -1.0);
      out.row_map.push_back({v.id, RowKind::kContinuity, ref, ends[i]});
      ++row;
    }
    if (row >= out.entries.rows()) throw Error(ErrorCode::kInvalidArgs, "graph has more vertex conditions than unknowns");
    for (const auto& e : ends) add(row, e, flux_row(k, graph.arc(e.arc).length, e.end), flux_scale);
    out.row_map.push_back({v.id, RowKind::kKirchhoff, ref, ref});
    ++row;
  }
  if (row != out.entries.rows()) {
    throw Error(ErrorCode::kInvalidArgs, "vertex conditions do not match the arc count");
  }
  return out;
}

SingularSpectrum secular_singular_values(const MetricGraph& graph, double k) {
  const auto m = assemble_secular(graph, k, true);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.entries);
  const auto& s = svd.singularValues();
  return {s[s.size() - 1], s[0]};
}

int secular_determinant_sign(const MetricGraph& graph, double k) {
  const auto m = assemble_secular(graph, k, true);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.entries);
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag[i] == 0.0) return 0;
    if (diag[i] < 0.0) sign = -sign;
  }
  return sign;
}

double default_grid_step(const MetricGraph& graph) {
  return std::numbers::pi / (20.0 * graph.total_length());
}

Eigenpair constant_mode(const MetricGraph& graph) {
  const auto m = graph.arc_count();
  ModeCoefficients mode{0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * m))};
  const double b = 1.0 / std::sqrt(graph.total_length());
  for (std::size_t j = 0; j < m; ++j) mode.amps[2 * j + 1] = b;
  return {0.0, {mode}, 0.0};
}

Eigenpair extract_modes(const MetricGraph& graph, double k, double tol) {
  const auto m = assemble_secular(graph, k, true);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  const double rel = smax > 0.0 ? s[s.size() - 1] / smax : 0.0;
  if (!(rel < tol)) {
    throw Error(ErrorCode::kNotResonant,
                "relative smallest singular value " + std::to_string(rel) + " at k=" + std::to_string(k));
  }
  Eigen::Index nullity = 0;
  for (Eigen::Index i = s.size() - 1; i >= 0 && s[i] < tol * smax; --i) ++nullity;
  Eigen::MatrixXd basis = svd.matrixV().rightCols(nullity);

  // Orthonormalize in the graph inner product: X L^{-T} with G = L L^T.
  const Eigen::MatrixXd gram = basis.transpose() * graph_gram(graph, k) * basis;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  basis = llt.matrixL().solve(basis.transpose()).transpose();

  Eigenpair pair{k, {}, rel};
  for (Eigen::Index c = basis.cols() - 1; c >= 0; --c) {
    Eigen::VectorXd x = basis.col(c);
    canonical_sign(x);
    pair.modes.push_back({k, std::move(x)});
  }
  return pair;
}

Spectrum scan_spectrum(const MetricGraph& graph, const ScanOptions& options) {
  if (!(options.k_min >= 0.0) || !(options.k_max > options.k_min)) {
    throw Error(ErrorCode::kInvalidArgs, "require 0 <= k_min < k_max");
  }
  const double step = options.grid_step.value_or(default_grid_step(graph));
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgs, "grid_step must be positive");

  Spectrum out;
  out.grid_step = step;

  // One extra point beyond each end so roots at the range edges are interior.
  const double start = std::max(options.k_min - step, 0.25 * step);
  const auto count = static_cast<std::size_t>(std::ceil((options.k_max + step - start) / step)) + 1;
  std::vector<double> ks(count), sigma(count);
  std::vector<int> sign(count);
  for (std::size_t i = 0; i < count; ++i) ks[i] = start + static_cast<double>(i) * step;
  parallel_for(count, options.threads, [&](std::size_t i) {
    sigma[i] = secular_singular_values(graph, ks[i]).relative();
    sign[i] = secular_determinant_sign(graph, ks[i]);
  });

  // Odd-multiplicity roots flip the determinant sign; bisect those. Local
  // minima of sigma without a sign flip (even multiplicity, or two roots in
  // one cell) are refined by golden section.
  enum class Refine { kBisect, kGolden };
  std::vector<std::tuple<double, double, Refine>> brackets;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (sign[i] * sign[i + 1] < 0) brackets.emplace_back(ks[i], ks[i + 1], Refine::kBisect);
  }
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const bool flips = sign[i - 1] * sign[i] < 0 || sign[i] * sign[i + 1] < 0;
    if (!flips && sigma[i] < sigma[i - 1] && sigma[i] <= sigma[i + 1]) {
      brackets.emplace_back(ks[i - 1], ks[i + 1], Refine::kGolden);
    }
  }
  std::vector<double> roots(brackets.size());
  std::vector<double> residuals(brackets.size());
  parallel_for(brackets.size(), options.threads, [&](std::size_t i) {
    const auto [lo, hi, how] = brackets[i];
    roots[i] = how == Refine::kBisect ? bisect_sign(graph, lo, hi, 1e-12) : golden_minimize(graph, lo, hi, 1e-12);
    residuals[i] = secular_singular_values(graph, roots[i]).relative();
  });

  std::vector<std::pair<double, double>> accepted;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (residuals[i] < options.tol && roots[i] >= options.k_min && roots[i] <= options.k_max) {
      accepted.emplace_back(roots[i], residuals[i]);
    }
  }
  std::sort(accepted.begin(), accepted.end());
  constexpr double kMergeDistance = 1e-9;
  std::vector<std::pair<double, double>> unique;
  for (const auto& r : accepted) {
    if (!unique.empty() && r.first - unique.back().first < kMergeDistance) {
      if (r.second < unique.back().second) unique.back() = r;
      continue;
    }
    unique.push_back(r);
  }

  if (options.k_min == 0.0) out.pairs.push_back(constant_mode(graph));
  std::vector<Eigenpair> found(unique.size());
  parallel_for(unique.size(), options.threads,
               [&](std::size_t i) { found[i] = extract_modes(graph, unique[i].first, options.tol); });
  for (auto& p : found) out.pairs.push_back(std::move(p));
  return out;
}

double edge_norm_closed_form(double a, double b, double k, double l) {
  if (!(k > 0.0) || !(l > 0.0)) throw Error(ErrorCode::kInvalidArgs, "edge norm needs k > 0 and l > 0");
  return (a * a + b * b) * l / 2.0 + std::sin(2.0 * k * l) * (-a * a + b * b) / (4.0 * k) +
         a * b * (1.0 - std::cos(2.0 * k * l)) / (2.0 * k);
}

double edge_inner_product(double a1, double b1, double k1, double a2, double b2, double k2, double l) {
  const double d = k1 - k2;
  const double s = k1 + k2;
  const double cd = cos_integral(d, l), cs = cos_integral(s, l);
  const double sd = sin_integral(d, l), ss = sin_integral(s, l);
  return 0.5 * (a1 * a2 * (cd - cs) + b1 * b2 * (cd + cs) + a1 * b2 * (ss + sd) + b1 * a2 * (ss - sd));
}

double inner_product(const ModeCoefficients& v, const ModeCoefficients& w, const MetricGraph& graph) {
  const auto m = graph.arc_count();
  if (v.arc_count() != m || w.arc_count() != m) {
    throw Error(ErrorCode::kGraphMismatch, "mode and graph arc counts differ");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sum += edge_inner_product(v.a(j), v.b(j), v.k, w.a(j), w.b(j), w.k, graph.arc(j).length);
  }
  return sum;
}

double graph_norm(const ModeCoefficients& v, const MetricGraph& graph) {
  return std::sqrt(std::max(0.0, inner_product(v, v, graph)));
}

double mode_residual(const MetricGraph& graph, const ModeCoefficients& mode) {
  if (mode.arc_count() != graph.arc_count()) {
    throw Error(ErrorCode::kGraphMismatch, "mode and graph arc counts differ");
  }
  const double norm = mode.amps.norm();
  if (norm == 0.0) return 0.0;
  if (mode.k == 0.0) {
    // Constant field: every continuity row compares B values, fluxes vanish.
    double worst = 0.0;
    for (std::size_t j = 0; j < mode.arc_count(); ++j) {
      worst = std::max({worst, std::abs(mode.a(j)), std::abs(mode.b(j) - mode.b(0))});
    }
    return worst / norm;
  }
  const auto m = assemble_secular(graph, mode.k, true);
  return (m.entries * mode.amps).norm() / norm;
}

}  // namespace qgraph
