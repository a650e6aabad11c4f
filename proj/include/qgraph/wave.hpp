#pragma once

#include <map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

// Finite-difference grid on a metric graph. The state vector holds one value
// per vertex (indices 0..n-1, in graph vertex order) followed by the interior
// nodes of each arc.
struct Mesh {
  std::vector<int> points;          // N_j cells on arc j
  std::vector<double> spacing;      // h_j = l_j / N_j
  std::vector<std::size_t> offset;  // state index of node 1 of arc j
  std::vector<std::size_t> origin;  // state index of the origin vertex of arc j
  std::vector<std::size_t> terminal;
  std::vector<int> vertex_ids;
  std::size_t size = 0;
  double dt = 0.0;
  double cfl = 0.0;

  std::size_t arc_count() const { return points.size(); }
  std::size_t vertex_count() const { return vertex_ids.size(); }
  // State index of node i (0..N_j) of arc j.
  std::size_t node(std::size_t arc, int i) const;
  double min_spacing() const;
};

// N_j = max(4, round(l_j / dx_target)), dt = cfl * min_j h_j.
// Throws Error(kInvalidDx) for dx_target <= 0 and Error(kCflViolation) for
// cfl outside (0, 1).
Mesh discretize(const MetricGraph& graph, double dx_target, double cfl);

struct Boundary {
  enum class Kind { kNeumann, kRadiation };
  Kind kind = Kind::kNeumann;
  double epsilon = 1.0;  // eps u_t = u_x, x measured into the arc

  static Boundary neumann() { return {}; }
  static Boundary radiation(double eps) { return {Kind::kRadiation, eps}; }
};

struct WaveState {
  Eigen::VectorXd u;
  Eigen::VectorXd u_prev;
  double t = 0.0;
  std::vector<Boundary> boundaries;  // per vertex, in mesh vertex order
};

// Leaf vertices default to Neumann; only degree-1 vertices may radiate.
std::vector<Boundary> resolve_boundaries(const MetricGraph& graph, const Mesh& mesh,
                                         const std::map<int, Boundary>& overrides);

// Discrete generalized Laplacian (second differences on arcs, lumped flux
// balance at vertices, mirror-ghost Neumann at leaves).
Eigen::VectorXd apply_laplacian(const Mesh& mesh, const Eigen::VectorXd& u);

// Leapfrog start from u(0) and u_t(0) with a second-order Taylor step back.
WaveState initial_state(const Mesh& mesh, Eigen::VectorXd u0, const Eigen::VectorXd& v0,
                        std::vector<Boundary> boundaries);

// One leapfrog step (in place). Radiating leaves use a first-order upwind
// update of eps u_t = u_x.
void step_in_place(WaveState& state, const Mesh& mesh);
WaveState step(WaveState state, const Mesh& mesh);

struct EnergyReport {
  double t = 0.0;
  std::vector<double> per_edge;
  double total = 0.0;
};

// Per-arc discrete energy (u_t^2 + u_x^2) / 2 between the last two time
// levels: trapezoid weights for u_t, cell differences for u_x taken as the
// product of the two levels. This is the quantity leapfrog conserves exactly
// with Neumann leaves.
EnergyReport edge_energy(const WaveState& state, const Mesh& mesh);

// Samples v(x) = A_j sin(kx) + B_j cos(kx) at every node.
Eigen::VectorXd sample_mode(const ModeCoefficients& mode, const Mesh& mesh);

// Trapezoid graph inner product of two nodal fields.
double discrete_inner_product(const Mesh& mesh, const Eigen::VectorXd& f, const Eigen::VectorXd& g);

struct ModalAmplitude {
  std::size_t pair = 0;  // index into the eigenpair list
  std::size_t mode = 0;  // index within the eigenpair
  double k = 0.0;
  double amplitude = 0.0;
};

// a_q = <V^q, u> for every mode of every pair. Throws Error(kGraphMismatch).
std::vector<ModalAmplitude> project_modes(const WaveState& state, const Mesh& mesh, const std::vector<Eigenpair>& pairs);

// Sum over outgoing one-sided slopes at each non-leaf vertex.
std::vector<double> kirchhoff_residual(const WaveState& state, const Mesh& mesh);

struct GaussianPulse {
  int arc_id = 1;
  double center = 0.0;  // arc coordinate
  double width = 1.0;
  double amplitude = 1.0;
  double velocity = 0.0;  // u_t(x, 0) = velocity * profile
};

struct ModeInitial {
  ModeCoefficients mode;
  double amplitude = 1.0;
};

struct SimulationConfig {
  double dx = 0.05;
  double cfl = 0.9;
  double t_end = 0.0;
  double report_every = 0.0;    // energy cadence; 0 reports only the end points
  double snapshot_every = 0.0;  // 0 disables field snapshots
  std::variant<GaussianPulse, ModeInitial> initial = GaussianPulse{};
  std::map<int, Boundary> boundaries;
  std::vector<Eigenpair> track_modes;  // optional modal amplitudes at each report
};

struct Snapshot {
  double t = 0.0;
  std::vector<std::vector<double>> arcs;  // node values 0..N_j per arc
};

struct Trajectory {
  Mesh mesh;
  std::vector<EnergyReport> energies;
  std::vector<std::vector<ModalAmplitude>> amplitudes;  // parallel to energies when tracking
  std::vector<Snapshot> snapshots;
  WaveState final_state;
};

Snapshot take_snapshot(const WaveState& state, const Mesh& mesh);

// Steps to t_end with dt shrunk so that t_end is hit exactly.
Trajectory run(const MetricGraph& graph, const SimulationConfig& config);

}  // namespace qgraph
