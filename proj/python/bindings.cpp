#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qgraph/cli.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/io.hpp"
#include "qgraph/localization.hpp"
#include "qgraph/resonance.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/wave.hpp"

namespace py = pybind11;
using namespace qgraph;

namespace {

MetricGraph graph_from_text(const std::string& text) { return graph_from_json(nlohmann::json::parse(text)); }

std::vector<std::pair<double, double>> coefficient_pairs(const ModeCoefficients& m) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t j = 0; j < m.arc_count(); ++j) out.emplace_back(m.a(j), m.b(j));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Eigenmodes, localization and wave propagation on metric graphs.";

  // QGraphError carries the contract name in `code`.
  static PyObject* error_type = PyErr_NewException("qgraph._core.QGraphError", PyExc_RuntimeError, nullptr);
  m.attr("QGraphError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<Vertex>(m, "Vertex")
      .def(py::init([](int id) { return Vertex{id, {}, {}}; }), py::arg("id"))
      .def_readwrite("id", &Vertex::id)
      .def_readwrite("x", &Vertex::x)
      .def_readwrite("y", &Vertex::y);

  py::class_<Arc>(m, "Arc")
      .def(py::init([](int id, int from, int to, double length) { return Arc{id, from, to, length}; }),
           py::arg("id"), py::arg("origin"), py::arg("terminal"), py::arg("length"))
      .def_readwrite("id", &Arc::id)
      .def_readwrite("origin", &Arc::from)
      .def_readwrite("terminal", &Arc::to)
      .def_readwrite("length", &Arc::length);

  py::class_<MetricGraph>(m, "MetricGraph")
      .def(py::init<std::vector<Vertex>, std::vector<Arc>>(), py::arg("vertices"), py::arg("arcs"))
      .def_property_readonly("vertices", &MetricGraph::vertices)
      .def_property_readonly("arcs", &MetricGraph::arcs)
      .def("vertex_count", &MetricGraph::vertex_count)
      .def("arc_count", &MetricGraph::arc_count)
      .def("degree", &MetricGraph::degree)
      .def("total_length", &MetricGraph::total_length)
      .def("with_length", &MetricGraph::with_length, py::arg("arc_id"), py::arg("length"))
      .def("validation_issues",
           [](const MetricGraph& g) {
             std::vector<std::string> out;
             for (const auto& i : validate(g).issues) out.push_back(to_string(i.code) + ": " + i.message);
             return out;
           })
      .def("to_json", [](const MetricGraph& g) { return graph_to_json(g).dump(); })
      .def_static("from_json", &graph_from_text, py::arg("text"))
      .def("__eq__", [](const MetricGraph& a, const MetricGraph& b) { return a == b; })
      .def("__repr__", [](const MetricGraph& g) {
        return "<MetricGraph " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.arc_count()) +
               " arcs>";
      });

  m.def("read_graph", &read_graph, py::arg("path"));
  m.def("write_graph", &write_graph, py::arg("graph"), py::arg("path"));
  m.def("merge_degree_two", &merge_degree_two, py::arg("graph"));
  m.def("load_g14", &load_g14);
  m.def(
      "generate_buffon",
      [](int needles, double box, double length, std::optional<double> length_max, std::uint64_t seed, double trim) {
        BuffonOptions o;
        o.needle_count = needles;
        o.box_side = box;
        o.length_law = length_max ? LengthLaw::uniform(length, *length_max) : LengthLaw::fixed(length);
        o.seed = seed;
        o.trim_epsilon = trim;
        return generate_buffon(o);
      },
      py::arg("needles") = 200, py::arg("box") = 8.0, py::arg("length") = 1.0, py::arg("length_max") = py::none(),
      py::arg("seed") = 0, py::arg("trim") = 0.0);

  py::class_<ModeCoefficients>(m, "Mode")
      .def_readonly("k", &ModeCoefficients::k)
      .def_readonly("amplitudes", &ModeCoefficients::amps)
      .def("coefficients", &coefficient_pairs, "(A_j, B_j) for each arc position")
      .def("value", &ModeCoefficients::value, py::arg("arc_position"), py::arg("x"));

  py::class_<Eigenpair>(m, "Eigenpair")
      .def_readonly("k", &Eigenpair::k)
      .def_readonly("modes", &Eigenpair::modes)
      .def_readonly("residual", &Eigenpair::residual)
      .def_property_readonly("multiplicity", &Eigenpair::multiplicity);

  m.def(
      "scan_spectrum",
      [](const MetricGraph& g, double k_min, double k_max, std::optional<double> grid_step, double tol, int threads) {
        ScanOptions o;
        o.k_min = k_min;
        o.k_max = k_max;
        o.grid_step = grid_step;
        o.tol = tol;
        o.threads = threads;
        return scan_spectrum(g, o).pairs;
      },
      py::arg("graph"), py::arg("k_min") = 0.0, py::arg("k_max") = 1.0, py::arg("grid_step") = py::none(),
      py::arg("tol") = 1e-8, py::arg("threads") = 0);
  m.def("extract_modes", &extract_modes, py::arg("graph"), py::arg("k"), py::arg("tol") = 1e-8);
  m.def("smallest_singular_value", [](const MetricGraph& g, double k) {
    return secular_singular_values(g, k).relative();
  });
  m.def("inner_product", &inner_product, py::arg("v"), py::arg("w"), py::arg("graph"));
  m.def("mode_residual", &mode_residual, py::arg("graph"), py::arg("mode"));
  m.def("edge_norm", &edge_norm_closed_form, py::arg("a"), py::arg("b"), py::arg("k"), py::arg("length"));

  py::class_<LocalizationReport>(m, "LocalizationReport")
      .def_readonly("q", &LocalizationReport::q)
      .def_readonly("k", &LocalizationReport::k)
      .def_readonly("ratios", &LocalizationReport::ratios)
      .def_readonly("densities", &LocalizationReport::densities)
      .def_readonly("criterion", &LocalizationReport::criterion)
      .def_readonly("ipr", &LocalizationReport::ipr)
      .def_property_readonly("bands",
                             [](const LocalizationReport& r) {
                               std::vector<int> out;
                               for (auto b : r.bands) out.push_back(static_cast<int>(b));
                               return out;
                             })
      .def("approximately_localized", &LocalizationReport::approximately_localized)
      .def("active_arcs", &LocalizationReport::active_arcs, py::arg("graph"), py::arg("threshold") = 1e-6);

  m.def("localization_report", &localization_report, py::arg("q"), py::arg("mode"), py::arg("graph"));

  py::class_<ResonanceSpec>(m, "ResonanceSpec")
      .def_property_readonly("kind", [](const ResonanceSpec& s) { return to_string(s.kind); })
      .def_readonly("arc_ids", &ResonanceSpec::arc_ids)
      .def_readonly("integers", &ResonanceSpec::integers)
      .def_readonly("k", &ResonanceSpec::k)
      .def_property_readonly("multiplicity", &ResonanceSpec::multiplicity);

  m.def(
      "check_shape",
      [](const MetricGraph& g, const std::vector<int>& arcs, const std::string& shape, int n_max) {
        return check_shape(g, arcs, shape_from_string(shape), CheckOptions{n_max, 1e-9});
      },
      py::arg("graph"), py::arg("arcs"), py::arg("shape"), py::arg("n_max") = 64);
  m.def("construct_mode", &construct_mode, py::arg("graph"), py::arg("spec"));
  m.def(
      "tune_lengths",
      [](const MetricGraph& g, const std::vector<int>& arcs, const std::string& shape, double k) {
        return tune_lengths(g, arcs, shape_from_string(shape), k);
      },
      py::arg("graph"), py::arg("arcs"), py::arg("shape"), py::arg("k"));
  m.def(
      "certify_nonexistence",
      [](const std::string& config, const std::vector<double>& lengths, double k) {
        auto c = certify_nonexistence(nonexistence_from_string(config), lengths, k);
        return py::dict(py::arg("rank") = c.rank, py::arg("unknowns") = c.unknowns,
                        py::arg("full_rank") = c.full_rank(), py::arg("singular_values") = c.singular_values,
                        py::arg("summary") = c.summary());
      },
      py::arg("config"), py::arg("lengths"), py::arg("k"));

  m.def(
      "simulate_pulse",
      [](const MetricGraph& g, int arc, double center, double width, double amplitude, double velocity,
         double t_end, double dx, double cfl, const std::map<int, double>& radiation, double report_every) {
        SimulationConfig c;
        c.dx = dx;
        c.cfl = cfl;
        c.t_end = t_end;
        c.report_every = report_every;
        c.initial = GaussianPulse{arc, center, width, amplitude, velocity};
        for (auto [v, eps] : radiation) c.boundaries[v] = Boundary::radiation(eps);
        const auto tr = run(g, c);
        std::vector<double> t, total;
        std::vector<std::vector<double>> per_arc;
        for (const auto& e : tr.energies) {
          t.push_back(e.t);
          total.push_back(e.total);
          per_arc.push_back(e.per_edge);
        }
        return py::dict(py::arg("t") = t, py::arg("total") = total, py::arg("per_arc") = per_arc,
                        py::arg("dt") = tr.mesh.dt);
      },
      py::arg("graph"), py::arg("arc"), py::arg("center"), py::arg("width") = 1.0, py::arg("amplitude") = 1.0,
      py::arg("velocity") = 0.0, py::arg("t_end") = 1.0, py::arg("dx") = 0.05, py::arg("cfl") = 0.9,
      py::arg("radiation") = std::map<int, double>{}, py::arg("report_every") = 0.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        auto out = run_command(args);
        return py::make_tuple(out.exit_code, out.summary);
      },
      py::arg("args"), "Runs a qgraph subcommand; returns (exit_code, summary).");
}
