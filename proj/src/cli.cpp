#include "qgraph/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/io.hpp"
#include "qgraph/localization.hpp"
#include "qgraph/resonance.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/wave.hpp"

namespace qgraph {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int nmax = 64;
  int threads = 0;
};

std::string fmt(double v) { return format_double(v); }

MetricGraph load_checked(const fs::path& path) {
  auto g = read_graph(path);
  require_valid(g);
  return g;
}

void emit(CommandOutcome& out, const std::optional<fs::path>& path, const std::string& text) {
  if (path) {
    write_text(*path, text);
    out.artifacts.push_back(*path);
  } else {
    out.summary += text;
  }
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "q,k,multiplicity,residual\n";
  int q = 1;
  for (const auto& p : s.pairs) {
    os << q++ << ',' << fmt(p.k) << ',' << p.multiplicity() << ',' << fmt(p.residual) << '\n';
  }
  return os.str();
}

json pair_to_json(const Eigenpair& p) {
  json modes = json::array();
  for (const auto& m : p.modes) modes.push_back(std::vector<double>(m.amps.data(), m.amps.data() + m.amps.size()));
  return {{"k", p.k}, {"modes", modes}};
}

Eigenpair pair_from_json(const json& doc, const MetricGraph& graph) {
  try {
    Eigenpair p;
    p.k = doc.at("k").get<double>();
    for (const auto& row : doc.at("modes")) {
      auto v = row.get<std::vector<double>>();
      if (v.size() != 2 * graph.arc_count()) {
        throw Error(ErrorCode::kGraphMismatch, "mode has " + std::to_string(v.size()) + " coefficients, graph needs " +
                                                   std::to_string(2 * graph.arc_count()));
      }
      p.modes.push_back({p.k, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))});
    }
    if (!p.modes.empty()) p.residual = mode_residual(graph, p.modes.front());
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed mode document: ") + e.what());
  }
}

std::vector<Eigenpair> pairs_from_json(const json& doc, const MetricGraph& graph) {
  std::vector<Eigenpair> out;
  if (doc.is_array()) {
    for (const auto& d : doc) out.push_back(pair_from_json(d, graph));
  } else {
    out.push_back(pair_from_json(doc, graph));
  }
  return out;
}

json spec_to_json(const ResonanceSpec& s) {
  return {{"kind", to_string(s.kind)}, {"arcs", s.arc_ids}, {"n", s.integers}, {"k", s.k}};
}

std::string shape_rule(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kCycle:
      return "cycle rule: l_j = n_j pi / k with sum n_j even; one localized mode";
    case ShapeKind::kPumpkin:
      return "pumpkin rule: l_j = n_j pi / k with all n_j of one parity; p - 1 localized modes";
    case ShapeKind::kLeaves:
      return "leaf rule: l_j = o_j pi / (2k) with o_j odd; p - 1 localized modes";
  }
  return {};
}

std::map<int, Boundary> parse_boundaries(const json& doc) {
  std::map<int, Boundary> out;
  for (const auto& [key, value] : doc.items()) {
    const int id = std::stoi(key);
    if (value.is_string() && value.get<std::string>() == "neumann") {
      out[id] = Boundary::neumann();
    } else if (value.is_object() && value.contains("radiation")) {
      out[id] = Boundary::radiation(value.at("radiation").get<double>());
    } else {
      throw Error(ErrorCode::kParse, "boundary for vertex " + key + " must be \"neumann\" or {\"radiation\": eps}");
    }
  }
  return out;
}

SimulationConfig parse_sim_config(const json& doc, const MetricGraph& graph) {
  SimulationConfig c;
  try {
    c.dx = doc.value("dx", c.dx);
    c.cfl = doc.value("cfl", c.cfl);
    c.t_end = doc.at("t_end").get<double>();
    c.snapshot_every = doc.value("snapshot_every", 0.0);
    c.report_every = doc.value("report_every", 0.0);
    const auto& init = doc.at("initial");
    const std::string type = init.value("type", "gaussian");
    if (type == "gaussian") {
      GaussianPulse g;
      g.arc_id = init.at("arc").get<int>();
      g.center = init.at("center").get<double>();
      g.width = init.at("width").get<double>();
      g.amplitude = init.value("amplitude", 1.0);
      g.velocity = init.value("velocity", 0.0);
      c.initial = g;
    } else if (type == "mode") {
      auto p = pair_from_json(init, graph);
      if (p.modes.empty()) throw Error(ErrorCode::kParse, "mode initial condition has no coefficients");
      c.initial = ModeInitial{p.modes.front(), init.value("amplitude", 1.0)};
    } else {
      throw Error(ErrorCode::kParse, "unknown initial condition type " + type);
    }
    if (doc.contains("boundaries")) c.boundaries = parse_boundaries(doc.at("boundaries"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed simulation config: ") + e.what());
  }
  return c;
}

std::vector<int> parse_ids(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--arcs", "not an integer: " + item);
    }
  }
  if (out.empty()) throw CLI::ValidationError("--arcs", "empty arc list");
  return out;
}

}  // namespace

CommandOutcome run_command(const std::vector<std::string>& args) {
  CommandOutcome out;
  CLI::App app{"Spectra, localized modes and waves on metric graphs", "qgraph"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed for generators");
  app.add_option("--tol", g.tol, "Relative singular-value tolerance");
  app.add_option("--nmax", g.nmax, "Largest integer tried in resonance searches");
  app.add_option("--threads", g.threads, "Worker threads for scans (0: all cores)");

  // spectrum
  std::string graph_path;
  double kmin = 0.0, kmax = 1.0, k = 0.0;
  std::optional<double> grid_step;
  std::optional<fs::path> out_path;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues in [kmin, kmax] as CSV");
  spectrum->add_option("--graph", graph_path)->required();
  spectrum->add_option("--kmin", kmin);
  spectrum->add_option("--kmax", kmax);
  spectrum->add_option("--grid-step", grid_step);
  spectrum->add_option("--out", out_path);
  spectrum->fallthrough();

  // modes
  std::optional<double> k_single;
  auto* modes = app.add_subcommand("modes", "Eigenvector coefficients as JSON");
  modes->add_option("--graph", graph_path)->required();
  modes->add_option("--k", k_single, "Single frequency; otherwise scan [kmin, kmax]");
  modes->add_option("--kmin", kmin);
  modes->add_option("--kmax", kmax);
  modes->add_option("--grid-step", grid_step);
  modes->add_option("--out", out_path);
  modes->fallthrough();

  // localize
  std::optional<fs::path> modes_path, json_path, hist_path;
  double active_threshold = 1e-6;
  auto* localize = app.add_subcommand("localize", "Per-edge L2 ratios, bands and localization summary");
  localize->add_option("--graph", graph_path)->required();
  localize->add_option("--modes", modes_path, "Mode JSON from `modes`; otherwise scan [kmin, kmax]");
  localize->add_option("--kmin", kmin);
  localize->add_option("--kmax", kmax);
  localize->add_option("--grid-step", grid_step);
  localize->add_option("--out", out_path, "Per-edge CSV");
  localize->add_option("--summary", json_path, "Summary JSON");
  localize->add_option("--histogram", hist_path, "Band counts CSV");
  localize->add_option("--active-threshold", active_threshold);
  localize->fallthrough();

  // resonance / tune
  std::string arcs_list, shape_name;
  auto* resonance = app.add_subcommand("resonance", "Resonance condition for a cycle, pumpkin or leaf star");
  resonance->add_option("--graph", graph_path)->required();
  resonance->add_option("--arcs", arcs_list)->required();
  resonance->add_option("--shape", shape_name)->required();
  resonance->add_option("--out", out_path);
  resonance->fallthrough();

  std::optional<fs::path> spec_path;
  auto* tune = app.add_subcommand("tune", "Adjust arc lengths so a shape resonates at k");
  tune->add_option("--graph", graph_path)->required();
  tune->add_option("--arcs", arcs_list)->required();
  tune->add_option("--shape", shape_name)->required();
  tune->add_option("--k", k)->required();
  tune->add_option("--out", out_path, "Tuned graph JSON");
  tune->add_option("--spec", spec_path, "Resonance spec JSON");
  tune->fallthrough();

  // certify
  std::string config_name;
  std::vector<double> lengths;
  auto* certify = app.add_subcommand("certify", "Rank certificate excluding localized modes on a small support");
  certify->add_option("config", config_name, "single_arc | leaf | two_connected_arcs | degree3_star")->required();
  certify->add_option("--length", lengths, "Arc length (repeat or comma-separate)")->required()->delimiter(',');
  certify->add_option("--k", k)->required();
  certify->add_option("--out", out_path);
  certify->fallthrough();

  // generate
  std::string source;
  BuffonOptions buffon;
  double needle_length = 1.0;
  std::optional<double> needle_length_max;
  auto* generate = app.add_subcommand("generate", "Write a graph: buffon needles or the g14 fixture");
  generate->add_option("source", source, "buffon | g14")->required()->check(CLI::IsMember({"buffon", "g14"}));
  generate->add_option("--needles", buffon.needle_count);
  generate->add_option("--box", buffon.box_side);
  generate->add_option("--length", needle_length, "Needle length (lower bound with --length-max)");
  generate->add_option("--length-max", needle_length_max, "Upper bound for uniformly drawn lengths");
  generate->add_option("--trim", buffon.trim_epsilon, "Drop leaf arcs shorter than this");
  generate->add_option("--out", out_path);
  generate->fallthrough();

  // wave
  fs::path config_path;
  std::optional<fs::path> snapshots_path, amplitudes_path;
  std::optional<double> track_kmax;
  auto* wave = app.add_subcommand("wave", "Time-domain simulation with per-edge energies");
  wave->add_option("--graph", graph_path)->required();
  wave->add_option("--config", config_path)->required();
  wave->add_option("--out", out_path, "Trajectory CSV");
  wave->add_option("--snapshots", snapshots_path, "Field snapshots JSON");
  wave->add_option("--track-kmax", track_kmax, "Project onto all modes with k <= this value");
  wave->add_option("--amplitudes", amplitudes_path, "Modal amplitudes CSV");
  wave->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out.summary = app.help();
    return out;
  } catch (const CLI::CallForAllHelp&) {
    out.summary = app.help("", CLI::AppFormatMode::All);
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = 2;
    out.summary = std::string("usage error: ") + e.what() + "\n";
    return out;
  }

  auto scan = [&](const MetricGraph& graph) {
    ScanOptions o;
    o.k_min = kmin;
    o.k_max = kmax;
    o.grid_step = grid_step;
    o.tol = g.tol;
    o.threads = g.threads;
    return scan_spectrum(graph, o);
  };
  auto shape_or_usage = [&]() {
    try {
      return shape_from_string(shape_name);
    } catch (const Error&) {
      throw CLI::ValidationError("--shape", "expected cycle, pumpkin or leaves, got " + shape_name);
    }
  };

  try {
    if (*spectrum) {
      if (kmin < 0.0 || kmax < kmin) throw CLI::ValidationError("--kmin/--kmax", "need 0 <= kmin <= kmax");
      const auto graph = load_checked(graph_path);
      emit(out, out_path, spectrum_csv(scan(graph)));
    } else if (*modes) {
      const auto graph = load_checked(graph_path);
      json doc;
      if (k_single) {
        doc = pair_to_json(extract_modes(graph, *k_single, g.tol));
      } else {
        doc = json::array();
        for (const auto& p : scan(graph).pairs) doc.push_back(pair_to_json(p));
      }
      emit(out, out_path, doc.dump(2) + "\n");
    } else if (*localize) {
      const auto graph = load_checked(graph_path);
      const auto pairs = modes_path ? pairs_from_json(read_json(*modes_path), graph) : scan(graph).pairs;
      std::ostringstream csv, hist;
      csv << "q,k,j,e_qj,E_qj,band\n";
      hist << "q,k,band0,band1,band2,band3\n";
      json summary = json::array();
      int q = 1;
      for (const auto& p : pairs) {
        for (const auto& mode : p.modes) {
          const auto r = localization_report(q, mode, graph);
          int counts[4] = {0, 0, 0, 0};
          for (std::size_t j = 0; j < r.ratios.size(); ++j) {
            csv << q << ',' << fmt(p.k) << ',' << graph.arc(j).id << ',' << fmt(r.ratios[j]) << ','
                << fmt(r.densities[j]) << ',' << to_string(r.bands[j]) << '\n';
            ++counts[static_cast<int>(r.bands[j])];
          }
          hist << q << ',' << fmt(p.k) << ',' << counts[0] << ',' << counts[1] << ',' << counts[2] << ','
               << counts[3] << '\n';
          summary.push_back({{"q", q},
                             {"k", p.k},
                             {"criterion", r.criterion},
                             {"ipr", r.ipr},
                             {"active_edges", r.active_arcs(graph, active_threshold)}});
        }
        ++q;
      }
      emit(out, out_path, csv.str());
      if (json_path) emit(out, json_path, summary.dump(2) + "\n");
      if (hist_path) emit(out, hist_path, hist.str());
    } else if (*resonance) {
      const auto kind = shape_or_usage();
      const auto ids = parse_ids(arcs_list);
      const auto graph = load_checked(graph_path);
      CheckOptions o;
      o.n_max = g.nmax;
      const auto spec = check_shape(graph, ids, kind, o);
      if (spec) {
        emit(out, out_path, spec_to_json(*spec).dump(2) + "\n");
        out.summary += shape_rule(spec->kind) + "\n";
      } else {
        emit(out, out_path, "absent\n");
        if (out_path) out.summary += "absent\n";
      }
    } else if (*tune) {
      const auto kind = shape_or_usage();
      const auto ids = parse_ids(arcs_list);
      const auto graph = load_checked(graph_path);
      auto [tuned, spec] = tune_lengths(graph, ids, kind, k);
      emit(out, out_path, graph_to_json(tuned).dump(2) + "\n");
      if (spec_path) emit(out, spec_path, spec_to_json(spec).dump(2) + "\n");
      out.summary += shape_rule(spec.kind) + "\n";
    } else if (*certify) {
      NonexistenceConfig config;
      try {
        config = nonexistence_from_string(config_name);
      } catch (const Error&) {
        throw CLI::ValidationError("config", "unknown configuration " + config_name);
      }
      const auto cert = certify_nonexistence(config, lengths, k);
      emit(out, out_path, cert.summary() + "\n");
    } else if (*generate) {
      MetricGraph graph;
      if (source == "g14") {
        graph = load_g14();
      } else {
        buffon.seed = g.seed;
        buffon.length_law =
            needle_length_max ? LengthLaw::uniform(needle_length, *needle_length_max) : LengthLaw::fixed(needle_length);
        graph = generate_buffon(buffon);
      }
      emit(out, out_path, graph_to_json(graph).dump(2) + "\n");
      out.summary += std::to_string(graph.vertex_count()) + " vertices, " + std::to_string(graph.arc_count()) +
                     " arcs\n";
    } else if (*wave) {
      const auto graph = load_checked(graph_path);
      auto config = parse_sim_config(read_json(config_path), graph);
      if (track_kmax) {
        kmin = 0.0;
        kmax = *track_kmax;
        config.track_modes = scan(graph).pairs;
      }
      const auto traj = run(graph, config);
      std::ostringstream csv;
      csv << 't';
      for (const auto& a : graph.arcs()) csv << ",E_" << a.id;
      csv << ",E_total\n";
      for (const auto& e : traj.energies) {
        csv << fmt(e.t);
        for (double v : e.per_edge) csv << ',' << fmt(v);
        csv << ',' << fmt(e.total) << '\n';
      }
      emit(out, out_path, csv.str());
      if (snapshots_path) {
        json snaps = json::array();
        for (const auto& s : traj.snapshots) snaps.push_back({{"t", s.t}, {"arcs", s.arcs}});
        emit(out, snapshots_path, snaps.dump() + "\n");
      }
      if (amplitudes_path) {
        std::ostringstream amp;
        amp << "t,q,mode,k,amplitude\n";
        for (std::size_t i = 0; i < traj.amplitudes.size(); ++i) {
          for (const auto& a : traj.amplitudes[i]) {
            amp << fmt(traj.energies[i].t) << ',' << a.pair + 1 << ',' << a.mode << ',' << fmt(a.k) << ','
                << fmt(a.amplitude) << '\n';
          }
        }
        emit(out, amplitudes_path, amp.str());
      }
    }
  } catch (const CLI::ParseError& e) {
    out.exit_code = 2;
    out.summary = std::string("usage error: ") + e.what() + "\n";
    out.artifacts.clear();
  } catch (const Error& e) {
    out.exit_code = 1;
    out.summary = std::string(e.what()) + "\n";
    out.artifacts.clear();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.summary = std::string("error: ") + e.what() + "\n";
    out.artifacts.clear();
  }
  return out;
}

}  // namespace qgraph
