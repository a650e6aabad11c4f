#include "qgraph/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using std::numbers::pi;

constexpr double kResidualTol = 1e-10;

// Per-arc direction relative to the shape's traversal: +1 when the arc's
// origin comes first.
struct Orientation {
  std::vector<std::size_t> positions;  // arc positions, in spec order
  std::vector<int> dirs;               // in spec order
  std::vector<std::size_t> order;      // traversal order as indices into spec order
};

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorCode::kShapeMismatch, what); }

std::vector<std::size_t> arc_positions(const MetricGraph& graph, const std::vector<int>& ids) {
  std::set<int> seen;
  std::vector<std::size_t> out;
  for (int id : ids) {
    if (!seen.insert(id).second) mismatch("arc " + std::to_string(id) + " listed twice");
    auto j = graph.arc_index(id);
    if (!j) mismatch("arc " + std::to_string(id) + " not in graph");
    out.push_back(*j);
  }
  return out;
}

Orientation cycle_orientation(const MetricGraph& graph, const std::vector<int>& ids) {
  if (ids.size() < 3) mismatch("a polygon needs at least three arcs");
  Orientation o;
  o.positions = arc_positions(graph, ids);
  o.dirs.assign(ids.size(), 0);
  std::vector<bool> used(ids.size(), false);
  std::set<int> visited;
  const Arc& first = graph.arc(o.positions[0]);
  if (first.from == first.to) mismatch("self-loop cannot be part of a polygon");
  const int start = first.from;
  int at = first.to;
  used[0] = true;
  o.dirs[0] = 1;
  o.order.push_back(0);
  visited.insert(start);
  for (std::size_t step = 1; step < ids.size(); ++step) {
    if (!visited.insert(at).second) mismatch("arcs do not form a simple cycle");
    std::size_t found = ids.size();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (used[i]) continue;
      const Arc& a = graph.arc(o.positions[i]);
      if (a.from == at || a.to == at) {
        if (found != ids.size()) mismatch("vertex " + std::to_string(at) + " has more than two polygon arcs");
        found = i;
      }
    }
    if (found == ids.size()) mismatch("arcs do not form a closed chain");
    const Arc& a = graph.arc(o.positions[found]);
    used[found] = true;
    o.dirs[found] = a.from == at ? 1 : -1;
    at = a.from == at ? a.to : a.from;
    o.order.push_back(found);
  }
  if (at != start) mismatch("arcs do not close into a cycle");
  return o;
}

Orientation pumpkin_orientation(const MetricGraph& graph, const std::vector<int>& ids) {
  if (ids.size() < 2) mismatch("a pumpkin needs at least two parallel arcs");
  Orientation o;
  o.positions = arc_positions(graph, ids);
  const Arc& first = graph.arc(o.positions[0]);
  const int u = first.from, v = first.to;
  if (u == v) mismatch("self-loop cannot be part of a pumpkin");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Arc& a = graph.arc(o.positions[i]);
    if (a.from == u && a.to == v) {
      o.dirs.push_back(1);
    } else if (a.from == v && a.to == u) {
      o.dirs.push_back(-1);
    } else {
      mismatch("arc " + std::to_string(a.id) + " does not join the pumpkin vertices");
    }
    o.order.push_back(i);
  }
  return o;
}

Orientation leaves_orientation(const MetricGraph& graph, const std::vector<int>& ids) {
  if (ids.size() < 2) mismatch("a leaf star needs at least two leaves");
  Orientation o;
  o.positions = arc_positions(graph, ids);
  const Arc& first = graph.arc(o.positions[0]);
  for (int center : {first.from, first.to}) {
    bool ok = true;
    std::vector<int> dirs;
    for (std::size_t p : o.positions) {
      const Arc& a = graph.arc(p);
      if (a.from == a.to) {
        ok = false;
        break;
      }
      const int tip = a.from == center ? a.to : (a.to == center ? a.from : -1);
      if (a.from != center && a.to != center) {
        ok = false;
        break;
      }
      if (graph.degree(tip) != 1) {
        ok = false;
        break;
      }
      dirs.push_back(a.from == center ? 1 : -1);
    }
    if (ok) {
      o.dirs = std::move(dirs);
      for (std::size_t i = 0; i < ids.size(); ++i) o.order.push_back(i);
      return o;
    }
  }
  mismatch("arcs are not leaves sharing one vertex");
}

Orientation orientation(const MetricGraph& graph, const std::vector<int>& ids, ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kCycle: return cycle_orientation(graph, ids);
    case ShapeKind::kPumpkin: return pumpkin_orientation(graph, ids);
    case ShapeKind::kLeaves: return leaves_orientation(graph, ids);
  }
  mismatch("unknown shape");
}

// Searches leading integers n_1 = 1, 2, ... (odd only when `odd`) for a
// tuple with l_j / n_j equal within rel_tol that `admissible` accepts.
std::optional<std::vector<int>> search_tuple(std::span<const double> lengths, const CheckOptions& options, bool odd,
                                             const std::function<bool(const std::vector<int>&)>& admissible) {
  for (const double l : lengths) {
    if (!(l > 0.0)) throw Error(ErrorCode::kInvalidArgs, "lengths must be positive");
  }
  for (int n1 = 1; n1 <= options.n_max; n1 += odd ? 2 : 1) {
    const double unit = lengths[0] / n1;
    std::vector<int> n{n1};
    bool ok = true;
    for (std::size_t j = 1; j < lengths.size() && ok; ++j) {
      const double r = lengths[j] / unit;
      const long nj = odd ? 2 * std::lround((r - 1.0) / 2.0) + 1 : std::lround(r);
      if (nj < 1 || nj > options.n_max || std::abs(lengths[j] / static_cast<double>(nj) - unit) > options.rel_tol * unit) {
        ok = false;
      } else {
        n.push_back(static_cast<int>(nj));
      }
    }
    if (ok && admissible(n)) return n;
  }
  return std::nullopt;
}

bool same_parity(const std::vector<int>& n) {
  return std::all_of(n.begin(), n.end(), [&](int v) { return (v - n[0]) % 2 == 0; });
}

int integer_sum(const std::vector<int>& n) {
  int s = 0;
  for (int v : n) s += v;
  return s;
}

// Convert a coefficient a (field a sin(ks) with s measured along the shape's
// traversal) to the arc's own (A, B).
std::pair<double, double> to_arc_frame(ShapeKind kind, double a, int dir, int integer) {
  if (dir > 0) return {a, 0.0};
  const double sign = integer % 2 == 0 ? 1.0 : -1.0;  // cos(n pi)
  if (kind == ShapeKind::kLeaves) {
    // sin(kl - kx) = sin(kl) cos(kx) with kl = o pi / 2
    const double s = ((integer - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return {0.0, a * s};
  }
  // sin(kl - kx) = -cos(kl) sin(kx) with kl = n pi
  return {-a * sign, 0.0};
}

// Unnormalized localized modes with unit amplitude on active arcs.
std::vector<Eigen::VectorXd> elementary_modes(const MetricGraph& graph, const ResonanceSpec& spec) {
  if (spec.integers.size() != spec.arc_ids.size()) {
    throw Error(ErrorCode::kInvalidArgs, "spec needs one integer per arc");
  }
  const auto o = orientation(graph, spec.arc_ids, spec.kind);
  const auto m = static_cast<Eigen::Index>(graph.arc_count());
  const auto p = spec.arc_ids.size();
  std::vector<std::vector<double>> coeffs;  // in spec order
  if (spec.kind == ShapeKind::kCycle) {
    std::vector<double> a(p, 0.0);
    double cur = 1.0;
    for (std::size_t i : o.order) {
      a[i] = cur;
      cur *= spec.integers[i] % 2 == 0 ? 1.0 : -1.0;
    }
    coeffs.push_back(std::move(a));
  } else {
    for (std::size_t i = 1; i < p; ++i) {
      std::vector<double> a(p, 0.0);
      a[0] = 1.0;
      a[i] = -1.0;
      coeffs.push_back(std::move(a));
    }
  }
  std::vector<Eigen::VectorXd> out;
  for (const auto& a : coeffs) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * m);
    for (std::size_t i = 0; i < p; ++i) {
      const auto [A, B] = to_arc_frame(spec.kind, a[i], o.dirs[i], spec.integers[i]);
      x[2 * o.positions[i]] = A;
      x[2 * o.positions[i] + 1] = B;
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::set<int> shape_vertices(const MetricGraph& graph, const std::vector<int>& ids) {
  std::set<int> out;
  for (int id : ids) {
    auto j = graph.arc_index(id);
    if (!j) throw Error(ErrorCode::kInvalidArgs, "arc " + std::to_string(id) + " not in graph");
    out.insert(graph.arc(*j).from);
    out.insert(graph.arc(*j).to);
  }
  return out;
}

}  // namespace

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kCycle: return "cycle";
    case ShapeKind::kPumpkin: return "pumpkin";
    case ShapeKind::kLeaves: return "leaves";
  }
  return "cycle";
}

ShapeKind shape_from_string(const std::string& name) {
  if (name == "cycle" || name == "polygon" || name == "triangle" || name == "quadrilateral") return ShapeKind::kCycle;
  if (name == "pumpkin") return ShapeKind::kPumpkin;
  if (name == "leaves") return ShapeKind::kLeaves;
  throw Error(ErrorCode::kInvalidArgs, "unknown shape '" + name + "'");
}

std::size_t ResonanceSpec::multiplicity() const {
  return kind == ShapeKind::kCycle ? 1 : (integers.empty() ? 0 : integers.size() - 1);
}

std::optional<ResonanceSpec> check_cycle(std::span<const double> lengths, const CheckOptions& options) {
  if (lengths.size() == 2) return check_pumpkin(lengths, options);
  if (lengths.size() < 3) throw Error(ErrorCode::kInvalidArgs, "a polygon needs at least three lengths");
  // Later n_1 values include the doubled tuple, so an odd primitive sum is
  // repaired before the search gives up.
  auto n = search_tuple(lengths, options, false, [](const std::vector<int>& v) { return integer_sum(v) % 2 == 0; });
  if (!n) return std::nullopt;
  return ResonanceSpec{ShapeKind::kCycle, {}, *n, (*n)[0] * pi / lengths[0]};
}

std::optional<ResonanceSpec> check_pumpkin(std::span<const double> lengths, const CheckOptions& options) {
  if (lengths.size() < 2) throw Error(ErrorCode::kInvalidArgs, "a pumpkin needs at least two lengths");
  auto n = search_tuple(lengths, options, false, same_parity);
  if (!n) return std::nullopt;
  return ResonanceSpec{ShapeKind::kPumpkin, {}, *n, (*n)[0] * pi / lengths[0]};
}

std::optional<ResonanceSpec> check_leaves(std::span<const double> lengths, const CheckOptions& options) {
  if (lengths.size() < 2) throw Error(ErrorCode::kInvalidArgs, "a leaf star needs at least two lengths");
  auto n = search_tuple(lengths, options, true, [](const std::vector<int>&) { return true; });
  if (!n) return std::nullopt;
  return ResonanceSpec{ShapeKind::kLeaves, {}, *n, (*n)[0] * pi / (2.0 * lengths[0])};
}

std::optional<ResonanceSpec> check_shape(const MetricGraph& graph, const std::vector<int>& arc_ids, ShapeKind kind,
                                         const CheckOptions& options) {
  if (kind == ShapeKind::kCycle && arc_ids.size() == 2) kind = ShapeKind::kPumpkin;
  const auto o = orientation(graph, arc_ids, kind);
  std::vector<double> lengths;
  for (std::size_t p : o.positions) lengths.push_back(graph.arc(p).length);
  std::optional<ResonanceSpec> spec;
  switch (kind) {
    case ShapeKind::kCycle: spec = check_cycle(lengths, options); break;
    case ShapeKind::kPumpkin: spec = check_pumpkin(lengths, options); break;
    case ShapeKind::kLeaves: spec = check_leaves(lengths, options); break;
  }
  if (spec) spec->arc_ids = arc_ids;
  return spec;
}

Eigenpair construct_mode(const MetricGraph& graph, const ResonanceSpec& spec) {
  if (!(spec.k > 0.0)) throw Error(ErrorCode::kInvalidK, "spec frequency must be positive");
  Eigenpair pair{spec.k, {}, 0.0};
  for (auto& x : elementary_modes(graph, spec)) {
    ModeCoefficients mode{spec.k, std::move(x)};
    mode.amps /= graph_norm(mode, graph);
    const double r = mode_residual(graph, mode);
    if (!(r < kResidualTol)) {
      throw Error(ErrorCode::kNotResonant, "localized mode residual " + std::to_string(r) + " at k=" +
                                               std::to_string(spec.k));
    }
    pair.residual = std::max(pair.residual, r);
    pair.modes.push_back(std::move(mode));
  }
  return pair;
}

std::pair<MetricGraph, ResonanceSpec> tune_lengths(const MetricGraph& graph, const std::vector<int>& arc_ids,
                                                   ShapeKind kind, double k_target) {
  if (!(k_target > 0.0)) throw Error(ErrorCode::kInvalidK, "k_target must be positive");
  if (kind == ShapeKind::kCycle && arc_ids.size() == 2) kind = ShapeKind::kPumpkin;
  const auto o = orientation(graph, arc_ids, kind);
  const std::size_t p = arc_ids.size();
  std::vector<double> lengths;
  for (std::size_t i : o.positions) lengths.push_back(graph.arc(i).length);

  // Leaves resonate at odd multiples of pi / (2k); the others at multiples of pi / k.
  const double quantum = kind == ShapeKind::kLeaves ? pi / (2.0 * k_target) : pi / k_target;
  std::vector<int> n(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double r = lengths[j] / quantum;
    long v = kind == ShapeKind::kLeaves ? 2 * std::lround((r - 1.0) / 2.0) + 1 : std::lround(r);
    n[j] = static_cast<int>(std::max(1L, v));
  }
  auto shift_cost = [&](std::size_t j, int candidate) { return std::abs(candidate * quantum - lengths[j]); };
  // Cheapest +-1 change of n_j, never going below 1.
  auto best_shift = [&](std::size_t j) {
    int down = n[j] - 1, up = n[j] + 1;
    if (down < 1) return up;
    return shift_cost(j, down) < shift_cost(j, up) ? down : up;
  };

  if (kind == ShapeKind::kCycle && integer_sum(n) % 2 != 0) {
    std::size_t pick = 0;
    double cheapest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p; ++j) {
      const double c = shift_cost(j, best_shift(j));
      if (c < cheapest) {
        cheapest = c;
        pick = j;
      }
    }
    n[pick] = best_shift(pick);
  } else if (kind == ShapeKind::kPumpkin && !same_parity(n)) {
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int parity : {0, 1}) {
      auto trial = n;
      double cost = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        if (trial[j] % 2 == parity) continue;
        trial[j] = best_shift(j);
        cost += shift_cost(j, trial[j]);
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = trial;
      }
    }
    n = best;
  }

  MetricGraph tuned = graph;
  for (std::size_t j = 0; j < p; ++j) {
    const double target = n[j] * quantum;
    if (std::abs(target - lengths[j]) > 1e-12 * target) tuned = tuned.with_length(arc_ids[j], target);
  }
  const double k = kind == ShapeKind::kLeaves ? n[0] * pi / (2.0 * tuned.arc(o.positions[0]).length)
                                               : n[0] * pi / tuned.arc(o.positions[0]).length;
  return {tuned, ResonanceSpec{kind, arc_ids, n, k}};
}

CompositeMode join_composite(const ResonanceSpec& spec_a, const ResonanceSpec& spec_b, const MetricGraph& graph,
                             std::pair<int, int> glue) {
  if (std::abs(spec_a.k - spec_b.k) > 1e-12 * std::max(1.0, std::abs(spec_a.k))) {
    throw Error(ErrorCode::kKMismatch, "frequencies " + std::to_string(spec_a.k) + " and " + std::to_string(spec_b.k) +
                                           " differ");
  }
  std::set<int> arcs_a(spec_a.arc_ids.begin(), spec_a.arc_ids.end());
  for (int id : spec_b.arc_ids) {
    if (arcs_a.contains(id)) throw Error(ErrorCode::kInvalidArgs, "structures share arc " + std::to_string(id));
  }
  if (!shape_vertices(graph, spec_a.arc_ids).contains(glue.first) ||
      !shape_vertices(graph, spec_b.arc_ids).contains(glue.second)) {
    throw Error(ErrorCode::kInvalidArgs, "glue vertices must belong to their structures");
  }

  MetricGraph joined = graph;
  if (glue.first != glue.second) {
    std::vector<Vertex> vertices;
    for (const auto& v : graph.vertices()) {
      if (v.id != glue.second) vertices.push_back(v);
    }
    std::vector<Arc> arcs = graph.arcs();
    for (auto& a : arcs) {
      if (a.from == glue.second) a.from = glue.first;
      if (a.to == glue.second) a.to = glue.first;
    }
    joined = MetricGraph(std::move(vertices), std::move(arcs));
  }

  Eigen::VectorXd x = elementary_modes(joined, spec_a).front() + elementary_modes(joined, spec_b).front();
  std::vector<int> active = spec_a.arc_ids;
  active.insert(active.end(), spec_b.arc_ids.begin(), spec_b.arc_ids.end());
  std::sort(active.begin(), active.end());

  // An external arc at an active vertex carries no field, so the member
  // arcs alone must balance the flux there.
  const std::set<int> members(active.begin(), active.end());
  const double k = spec_a.k;
  for (int v : shape_vertices(joined, active)) {
    double flux = 0.0;
    bool external = false;
    for (const ArcEnd& e : joined.incident(v)) {
      const Arc& a = joined.arc(e.arc);
      if (!members.contains(a.id)) {
        external = true;
        continue;
      }
      const double A = x[2 * e.arc], B = x[2 * e.arc + 1];
      flux += e.end == End::kOrigin ? A : -(A * std::cos(k * a.length) - B * std::sin(k * a.length));
    }
    if (external && std::abs(flux) > kResidualTol) {
      throw Error(ErrorCode::kShapeMismatch,
                  "external arc at vertex " + std::to_string(v) + " meets an unbalanced flux");
    }
  }

  ModeCoefficients mode{k, std::move(x)};
  mode.amps /= graph_norm(mode, joined);
  const double r = mode_residual(joined, mode);
  if (!(r < kResidualTol)) {
    throw Error(ErrorCode::kNotResonant, "composite mode residual " + std::to_string(r));
  }
  return {joined, Eigenpair{k, {std::move(mode)}, r}, active};
}

std::string to_string(NonexistenceConfig config) {
  switch (config) {
    case NonexistenceConfig::kSingleArc: return "single_arc";
    case NonexistenceConfig::kLeaf: return "leaf";
    case NonexistenceConfig::kTwoConnectedArcs: return "two_connected_arcs";
    case NonexistenceConfig::kDegree3Star: return "degree3_star";
  }
  return "single_arc";
}

NonexistenceConfig nonexistence_from_string(const std::string& name) {
  if (name == "single_arc") return NonexistenceConfig::kSingleArc;
  if (name == "leaf") return NonexistenceConfig::kLeaf;
  if (name == "two_connected_arcs") return NonexistenceConfig::kTwoConnectedArcs;
  if (name == "degree3_star") return NonexistenceConfig::kDegree3Star;
  throw Error(ErrorCode::kInvalidArgs, "unknown configuration '" + name + "'");
}

std::size_t expected_arc_count(NonexistenceConfig config) {
  switch (config) {
    case NonexistenceConfig::kSingleArc:
    case NonexistenceConfig::kLeaf: return 1;
    case NonexistenceConfig::kTwoConnectedArcs: return 2;
    case NonexistenceConfig::kDegree3Star: return 3;
  }
  return 0;
}

std::string Certificate::summary() const {
  std::ostringstream os;
  os << "rank " << rank << "/" << unknowns << ": "
     << (full_rank() ? "no localized eigenvector" : "nontrivial localized solution not excluded");
  return os.str();
}

Certificate certify_nonexistence(NonexistenceConfig config, std::span<const double> lengths, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidK, "k must be positive");
  if (lengths.size() != expected_arc_count(config)) {
    throw Error(ErrorCode::kInvalidArgs, to_string(config) + " needs " +
                                             std::to_string(expected_arc_count(config)) + " lengths");
  }
  for (double l : lengths) {
    if (!(l > 0.0)) throw Error(ErrorCode::kInvalidArgs, "lengths must be positive");
  }
  const auto p = static_cast<Eigen::Index>(lengths.size());
  std::vector<Eigen::RowVectorXd> rows;
  auto row = [&] { return Eigen::RowVectorXd::Zero(2 * p).eval(); };
  // v_j(x) = A_j sin(kx) + B_j cos(kx); derivatives are divided by k.
  auto value_origin = [&](Eigen::Index j) { auto r = row(); r[2 * j + 1] = 1.0; return r; };
  auto value_end = [&](Eigen::Index j) {
    auto r = row();
    r[2 * j] = std::sin(k * lengths[j]);
    r[2 * j + 1] = std::cos(k * lengths[j]);
    return r;
  };
  auto slope_origin = [&](Eigen::Index j) { auto r = row(); r[2 * j] = 1.0; return r; };
  auto slope_end = [&](Eigen::Index j) {
    auto r = row();
    r[2 * j] = std::cos(k * lengths[j]);
    r[2 * j + 1] = -std::sin(k * lengths[j]);
    return r;
  };

  switch (config) {
    case NonexistenceConfig::kSingleArc:
      // Both ends inside the graph: field and slope vanish at each.
      rows = {value_origin(0), value_end(0), slope_origin(0), slope_end(0)};
      break;
    case NonexistenceConfig::kLeaf:
      // x = 0 inside the graph, x = l the free end.
      rows = {value_origin(0), slope_origin(0), slope_end(0)};
      break;
    case NonexistenceConfig::kTwoConnectedArcs:
      // Shared vertex at x = 0; the far ends meet only inactive arcs.
      rows = {value_origin(0), value_origin(1), slope_origin(0) + slope_origin(1),
              value_end(0),    value_end(1),    slope_end(0),
              slope_end(1)};
      break;
    case NonexistenceConfig::kDegree3Star:
      // Centre at x = 0; far ends meet only inactive arcs.
      rows = {slope_origin(0) + slope_origin(1) + slope_origin(2)};
      for (Eigen::Index j = 0; j < 3; ++j) {
        rows.push_back(slope_end(j));
        rows.push_back(value_end(j));
      }
      break;
  }

  Certificate cert;
  cert.config = config;
  cert.unknowns = static_cast<int>(2 * p);
  cert.system.resize(static_cast<Eigen::Index>(rows.size()), 2 * p);
  for (std::size_t i = 0; i < rows.size(); ++i) cert.system.row(static_cast<Eigen::Index>(i)) = rows[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cert.system);
  cert.singular_values = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, cert.singular_values[0]);
  cert.rank = static_cast<int>((cert.singular_values.array() > cutoff).count());
  return cert;
}

}  // namespace qgraph
