#include "qgraph/wave.hpp"

#include <algorithm>
#include <cmath>

#include "qgraph/error.hpp"

namespace qgraph {

std::size_t Mesh::node(std::size_t arc, int i) const {
  if (i == 0) return origin[arc];
  if (i == points[arc]) return terminal[arc];
  return offset[arc] + static_cast<std::size_t>(i - 1);
}

double Mesh::min_spacing() const { return *std::min_element(spacing.begin(), spacing.end()); }

Mesh discretize(const MetricGraph& graph, double dx_target, double cfl) {
  if (!(dx_target > 0.0)) throw Error(ErrorCode::kInvalidDx, "dx_target must be positive");
  if (!(cfl > 0.0 && cfl < 1.0)) throw Error(ErrorCode::kCflViolation, "cfl must lie in (0, 1)");
  if (graph.arc_count() == 0) throw Error(ErrorCode::kInvalidArgs, "graph has no arcs");
  Mesh mesh;
  for (const auto& v : graph.vertices()) mesh.vertex_ids.push_back(v.id);
  std::size_t next = graph.vertex_count();
  for (const auto& a : graph.arcs()) {
    const int n = std::max(4, static_cast<int>(std::lround(a.length / dx_target)));
    mesh.points.push_back(n);
    mesh.spacing.push_back(a.length / n);
    mesh.offset.push_back(next);
    mesh.origin.push_back(*graph.vertex_index(a.from));
    mesh.terminal.push_back(*graph.vertex_index(a.to));
    next += static_cast<std::size_t>(n - 1);
  }
  mesh.size = next;
  mesh.cfl = cfl;
  mesh.dt = cfl * mesh.min_spacing();
  return mesh;
}

std::vector<Boundary> resolve_boundaries(const MetricGraph& graph, const Mesh& mesh,
                                         const std::map<int, Boundary>& overrides) {
  std::vector<Boundary> out(mesh.vertex_count());
  for (const auto& [id, b] : overrides) {
    auto v = graph.vertex_index(id);
    if (!v) throw Error(ErrorCode::kInvalidArgs, "boundary for unknown vertex " + std::to_string(id));
    if (b.kind == Boundary::Kind::kRadiation) {
      if (graph.degree(id) != 1) {
        throw Error(ErrorCode::kInvalidArgs, "radiation condition needs a leaf, vertex " + std::to_string(id) +
                                                 " has degree " + std::to_string(graph.degree(id)));
      }
      if (!(b.epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgs, "radiation epsilon must be positive");
    }
    out[*v] = b;
  }
  return out;
}

namespace {

// Adds the vertex flux-balance terms: for each arc end, (u_nb - u_v) / h
// weighted later by 2 / sum(h).
void accumulate_vertex_terms(const Mesh& mesh, const Eigen::VectorXd& u, Eigen::VectorXd& flux,
                             Eigen::VectorXd& half_mass) {
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    const double h = mesh.spacing[j];
    const int n = mesh.points[j];
    const std::size_t a = mesh.origin[j], b = mesh.terminal[j];
    flux[a] += (u[mesh.node(j, 1)] - u[a]) / h;
    flux[b] += (u[mesh.node(j, n - 1)] - u[b]) / h;
    half_mass[a] += 0.5 * h;
    half_mass[b] += 0.5 * h;
  }
}

}  // namespace

Eigen::VectorXd apply_laplacian(const Mesh& mesh, const Eigen::VectorXd& u) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size));
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    const double inv_h2 = 1.0 / (mesh.spacing[j] * mesh.spacing[j]);
    const int n = mesh.points[j];
    for (int i = 1; i < n; ++i) {
      out[mesh.node(j, i)] = (u[mesh.node(j, i - 1)] - 2.0 * u[mesh.node(j, i)] + u[mesh.node(j, i + 1)]) * inv_h2;
    }
  }
  const auto nv = static_cast<Eigen::Index>(mesh.vertex_count());
  Eigen::VectorXd flux = Eigen::VectorXd::Zero(nv), half_mass = Eigen::VectorXd::Zero(nv);
  accumulate_vertex_terms(mesh, u, flux, half_mass);
  for (Eigen::Index v = 0; v < nv; ++v) {
    if (half_mass[v] > 0.0) out[v] = flux[v] / half_mass[v];
  }
  return out;
}

WaveState initial_state(const Mesh& mesh, Eigen::VectorXd u0, const Eigen::VectorXd& v0,
                        std::vector<Boundary> boundaries) {
  const auto n = static_cast<Eigen::Index>(mesh.size);
  if (u0.size() != n || v0.size() != n) throw Error(ErrorCode::kGraphMismatch, "initial data does not match mesh");
  if (boundaries.empty()) boundaries.assign(mesh.vertex_count(), Boundary{});
  WaveState s;
  const double dt = mesh.dt;
  s.u_prev = u0 - dt * v0 + 0.5 * dt * dt * apply_laplacian(mesh, u0);
  s.u = std::move(u0);
  s.t = 0.0;
  s.boundaries = std::move(boundaries);
  return s;
}

void step_in_place(WaveState& state, const Mesh& mesh) {
  const double dt = mesh.dt;
  if (dt > mesh.min_spacing()) throw Error(ErrorCode::kCflViolation, "dt exceeds the smallest spacing");
  Eigen::VectorXd next = 2.0 * state.u - state.u_prev + (dt * dt) * apply_laplacian(mesh, state.u);
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    const int n = mesh.points[j];
    for (auto [v, nb] : {std::pair{mesh.origin[j], mesh.node(j, 1)}, std::pair{mesh.terminal[j], mesh.node(j, n - 1)}}) {
      const Boundary& b = state.boundaries[v];
      if (b.kind != Boundary::Kind::kRadiation) continue;
      const double c = dt / (b.epsilon * mesh.spacing[j]);
      next[static_cast<Eigen::Index>(v)] = state.u[v] + c * (state.u[nb] - state.u[v]);
    }
  }
  state.u_prev = std::move(state.u);
  state.u = std::move(next);
  state.t += dt;
}

WaveState step(WaveState state, const Mesh& mesh) {
  step_in_place(state, mesh);
  return state;
}

EnergyReport edge_energy(const WaveState& state, const Mesh& mesh) {
  EnergyReport r;
  r.t = state.t;
  r.per_edge.assign(mesh.arc_count(), 0.0);
  const double dt = mesh.dt;
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    const double h = mesh.spacing[j];
    const int n = mesh.points[j];
    double kinetic = 0.0, potential = 0.0;
    for (int i = 0; i <= n; ++i) {
      const auto p = mesh.node(j, i);
      const double w = (i == 0 || i == n) ? 0.5 * h : h;
      const double ut = (state.u[p] - state.u_prev[p]) / dt;
      kinetic += w * ut * ut;
    }
    for (int i = 0; i < n; ++i) {
      const auto p = mesh.node(j, i), q = mesh.node(j, i + 1);
      potential += (state.u[q] - state.u[p]) * (state.u_prev[q] - state.u_prev[p]) / h;
    }
    r.per_edge[j] = 0.5 * (kinetic + potential);
    r.total += r.per_edge[j];
  }
  return r;
}

Eigen::VectorXd sample_mode(const ModeCoefficients& mode, const Mesh& mesh) {
  if (mode.arc_count() != mesh.arc_count()) throw Error(ErrorCode::kGraphMismatch, "mode and mesh arc counts differ");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.size));
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    for (int i = 0; i <= mesh.points[j]; ++i) out[mesh.node(j, i)] = mode.value(j, i * mesh.spacing[j]);
  }
  return out;
}

double discrete_inner_product(const Mesh& mesh, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  double sum = 0.0;
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    const double h = mesh.spacing[j];
    const int n = mesh.points[j];
    for (int i = 0; i <= n; ++i) {
      const auto p = mesh.node(j, i);
      sum += ((i == 0 || i == n) ? 0.5 * h : h) * f[p] * g[p];
    }
  }
  return sum;
}

std::vector<ModalAmplitude> project_modes(const WaveState& state, const Mesh& mesh,
                                          const std::vector<Eigenpair>& pairs) {
  std::vector<ModalAmplitude> out;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    for (std::size_t i = 0; i < pairs[q].modes.size(); ++i) {
      const auto v = sample_mode(pairs[q].modes[i], mesh);
      out.push_back({q, i, pairs[q].k, discrete_inner_product(mesh, v, state.u)});
    }
  }
  return out;
}

std::vector<double> kirchhoff_residual(const WaveState& state, const Mesh& mesh) {
  const auto nv = static_cast<Eigen::Index>(mesh.vertex_count());
  Eigen::VectorXd flux = Eigen::VectorXd::Zero(nv), half_mass = Eigen::VectorXd::Zero(nv);
  accumulate_vertex_terms(mesh, state.u, flux, half_mass);
  std::vector<int> degree(mesh.vertex_count(), 0);
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    ++degree[mesh.origin[j]];
    ++degree[mesh.terminal[j]];
  }
  std::vector<double> out(mesh.vertex_count(), 0.0);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (degree[v] > 1) out[v] = flux[static_cast<Eigen::Index>(v)];
  }
  return out;
}

Snapshot take_snapshot(const WaveState& state, const Mesh& mesh) {
  Snapshot s;
  s.t = state.t;
  for (std::size_t j = 0; j < mesh.arc_count(); ++j) {
    std::vector<double> values;
    for (int i = 0; i <= mesh.points[j]; ++i) values.push_back(state.u[mesh.node(j, i)]);
    s.arcs.push_back(std::move(values));
  }
  return s;
}

Trajectory run(const MetricGraph& graph, const SimulationConfig& config) {
  if (config.t_end < 0.0) throw Error(ErrorCode::kInvalidArgs, "t_end must be nonnegative");
  Trajectory out;
  out.mesh = discretize(graph, config.dx, config.cfl);
  Mesh& mesh = out.mesh;
  std::size_t steps = 0;
  if (config.t_end > 0.0) {
    steps = static_cast<std::size_t>(std::ceil(config.t_end / mesh.dt - 1e-9));
    mesh.dt = config.t_end / static_cast<double>(steps);
  }

  const auto n = static_cast<Eigen::Index>(mesh.size);
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(n), v0 = Eigen::VectorXd::Zero(n);
  if (const auto* g = std::get_if<GaussianPulse>(&config.initial)) {
    auto j = graph.arc_index(g->arc_id);
    if (!j) throw Error(ErrorCode::kInvalidArgs, "initial pulse on unknown arc " + std::to_string(g->arc_id));
    if (!(g->width > 0.0)) throw Error(ErrorCode::kInvalidArgs, "pulse width must be positive");
    for (int i = 1; i < mesh.points[*j]; ++i) {
      const double x = i * mesh.spacing[*j];
      const double z = (x - g->center) / g->width;
      const double profile = std::exp(-z * z);
      u0[static_cast<Eigen::Index>(mesh.node(*j, i))] = g->amplitude * profile;
      v0[static_cast<Eigen::Index>(mesh.node(*j, i))] = g->velocity * profile;
    }
  } else {
    const auto& m = std::get<ModeInitial>(config.initial);
    u0 = m.amplitude * sample_mode(m.mode, mesh);
  }

  WaveState state = initial_state(mesh, std::move(u0), v0, resolve_boundaries(graph, mesh, config.boundaries));

  auto report = [&] {
    out.energies.push_back(edge_energy(state, mesh));
    if (!config.track_modes.empty()) out.amplitudes.push_back(project_modes(state, mesh, config.track_modes));
  };
  auto due = [&](double every, double& next_time) {
    if (every <= 0.0 || state.t + 0.5 * mesh.dt < next_time) return false;
    next_time += every;
    return true;
  };

  double next_report = config.report_every;
  double next_snapshot = config.snapshot_every;
  report();
  if (config.snapshot_every > 0.0) out.snapshots.push_back(take_snapshot(state, mesh));
  for (std::size_t s = 0; s < steps; ++s) {
    step_in_place(state, mesh);
    const bool last = s + 1 == steps;
    if (due(config.report_every, next_report) || (last && config.report_every <= 0.0)) report();
    if (due(config.snapshot_every, next_snapshot)) out.snapshots.push_back(take_snapshot(state, mesh));
  }
  if (steps > 0 && config.report_every > 0.0 && std::abs(out.energies.back().t - state.t) > 0.5 * mesh.dt) report();
  out.final_state = std::move(state);
  return out;
}

}  // namespace qgraph
