#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "morrey/atoms.hpp"
#include "morrey/config.hpp"
#include "morrey/corpus.hpp"
#include "morrey/error.hpp"
#include "morrey/experiments.hpp"
#include "morrey/norms.hpp"
#include "morrey/operators.hpp"
#include "morrey/quadrature.hpp"

namespace py = pybind11;
using namespace morrey;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> shape_of(const Grid& g) {
  if (g.dimension() == 1) return {g.points_per_axis()};
  return {g.points_per_axis(), g.points_per_axis()};
}

Field to_field(const Grid& g, const CArray& a) {
  if (std::size_t(a.size()) != g.size()) throw InputError("array size does not match the grid");
  return Field(g, std::vector<cplx>(a.data(), a.data() + a.size()));
}

CArray to_array(const Field& f) {
  CArray out(shape_of(f.grid()));
  std::copy(f.samples().begin(), f.samples().end(), out.mutable_data());
  return out;
}

BallSet ball_set(const Grid& g, std::optional<std::vector<double>> radii, int stride) {
  return BallSet::lattice(g, radii ? *radii : dyadic_radii(g), stride);
}

py::dict report_dict(const SeminormReport& r) {
  py::dict d;
  d["kind"] = std::string(to_string(r.kind));
  d["value"] = r.value;
  d["witness_center"] = r.witness.center;
  d["witness_scale"] = r.witness.scale;
  d["truncation_estimate"] = r.truncation_estimate;
  return d;
}

LogTimeGrid time_grid(const Grid& g, const GeneratorSpec& gen, int nodes, std::optional<double> t_min,
                      std::optional<double> t_max) {
  const LogTimeGrid automatic = LogTimeGrid::for_grid(g, gen, nodes);
  return LogTimeGrid(t_min.value_or(automatic.t_min()), t_max.value_or(automatic.t_max()), nodes);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Morrey seminorms on periodic grids";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
  py::register_exception<DegenerateAtom>(m, "DegenerateAtom", PyExc_ValueError);
  py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, double>(), py::arg("n"), py::arg("N"), py::arg("L"))
      .def_property_readonly("n", &Grid::dimension)
      .def_property_readonly("N", &Grid::points_per_axis)
      .def_property_readonly("L", &Grid::domain_length)
      .def_property_readonly("h", &Grid::spacing)
      .def_property_readonly("origin", &Grid::origin)
      .def("coordinates", [](const Grid& g) {
        py::array_t<double> out(g.points_per_axis());
        for (int i = 0; i < g.points_per_axis(); ++i) out.mutable_data()[i] = g.coordinate(i);
        return out;
      })
      .def("dyadic_radii", [](const Grid& g) { return dyadic_radii(g); })
      .def("__repr__", [](const Grid& g) {
        std::ostringstream s;
        s << "Grid(n=" << g.dimension() << ", N=" << g.points_per_axis() << ", L=" << g.domain_length() << ")";
        return s.str();
      });

  m.def("apply_P", [](const Grid& g, const CArray& f, const std::string& gen, double t) {
    return to_array(apply_P(GeneratorSpec::from_name(gen), t, to_field(g, f)));
  }, py::arg("grid"), py::arg("f"), py::arg("generator"), py::arg("t"));
  m.def("apply_Q", [](const Grid& g, const CArray& f, const std::string& gen, double t) {
    return to_array(apply_Q(GeneratorSpec::from_name(gen), t, to_field(g, f)));
  }, py::arg("grid"), py::arg("f"), py::arg("generator"), py::arg("t"));

  m.def("classical_seminorm",
        [](const Grid& g, const CArray& f, double p, double lambda, std::optional<std::vector<double>> radii,
           int stride) { return report_dict(classical_seminorm(to_field(g, f), {p, lambda}, ball_set(g, radii, stride))); },
        py::arg("grid"), py::arg("f"), py::arg("p"), py::arg("lam"), py::arg("radii") = py::none(),
        py::arg("stride") = 1);
  m.def("semigroup_seminorm",
        [](const Grid& g, const CArray& f, double p, double lambda, const std::string& gen,
           std::optional<std::vector<double>> radii, int stride) {
          return report_dict(semigroup_seminorm(to_field(g, f), {p, lambda}, GeneratorSpec::from_name(gen),
                                                ball_set(g, radii, stride)));
        },
        py::arg("grid"), py::arg("f"), py::arg("p"), py::arg("lam"), py::arg("generator") = "heat",
        py::arg("radii") = py::none(), py::arg("stride") = 1);
  m.def("maximal_seminorm",
        [](const Grid& g, const CArray& f, double p, double lambda, const std::string& gen, std::vector<double> ts,
           int x_stride) {
          return report_dict(maximal_seminorm(to_field(g, f), {p, lambda}, GeneratorSpec::from_name(gen), ts, x_stride));
        },
        py::arg("grid"), py::arg("f"), py::arg("p"), py::arg("lam"), py::arg("generator"), py::arg("t_set"),
        py::arg("x_stride") = 1);
  m.def("square_function_seminorm",
        [](const Grid& g, const CArray& f, double p, double lambda, const std::string& gen,
           const std::string& variant, std::optional<std::vector<double>> radii, int stride, int nodes) {
          const auto spec = GeneratorSpec::from_name(gen);
          const auto v = variant == "poisson" ? SquareVariant::SquareFnPoisson : SquareVariant::SquareFnL;
          return report_dict(square_function_seminorm(to_field(g, f), {p, lambda}, spec, ball_set(g, radii, stride),
                                                      LogTimeGrid::for_grid(g, spec, nodes), v));
        },
        py::arg("grid"), py::arg("f"), py::arg("p"), py::arg("lam"), py::arg("generator") = "heat",
        py::arg("variant") = "l", py::arg("radii") = py::none(), py::arg("stride") = 1,
        py::arg("nodes") = LogTimeGrid::kDefaultNodes);
  m.def("carleson_tent_norm",
        [](const Grid& g, const CArray& f, double lambda, const std::string& gen,
           std::optional<std::vector<double>> radii, int stride, int nodes) {
          const auto spec = GeneratorSpec::from_name(gen);
          return report_dict(carleson_tent_norm(to_field(g, f), {2.0, lambda}, spec, ball_set(g, radii, stride),
                                                LogTimeGrid::for_grid(g, spec, nodes)));
        },
        py::arg("grid"), py::arg("f"), py::arg("lam"), py::arg("generator") = "heat", py::arg("radii") = py::none(),
        py::arg("stride") = 1, py::arg("nodes") = LogTimeGrid::kDefaultNodes);
  m.def("g_function_ratio",
        [](const Grid& g, const CArray& f, const std::string& gen, double p, int nodes, std::optional<double> t_min,
           std::optional<double> t_max) {
          const auto spec = GeneratorSpec::from_name(gen);
          return g_function_ratio(to_field(g, f), spec, p, time_grid(g, spec, nodes, t_min, t_max));
        },
        py::arg("grid"), py::arg("f"), py::arg("generator"), py::arg("p") = 2.0, py::arg("nodes") = 2048,
        py::arg("t_min") = py::none(), py::arg("t_max") = py::none());

  m.def("calderon_constant", &calderon_constant, py::arg("m"));
  m.def("calderon_integral", [](double order, double t_min, double t_max, int nodes) {
    return calderon_constant_check(order, LogTimeGrid(t_min, t_max, nodes)).integral;
  }, py::arg("m"), py::arg("t_min"), py::arg("t_max"), py::arg("nodes"));
  m.def("calderon_reproduce",
        [](const Grid& g, const CArray& f, const std::string& gen, int nodes, std::optional<double> t_min,
           std::optional<double> t_max) {
          const auto spec = GeneratorSpec::from_name(gen);
          return to_array(calderon_reproduce(spec, to_field(g, f), time_grid(g, spec, nodes, t_min, t_max)));
        },
        py::arg("grid"), py::arg("f"), py::arg("generator"), py::arg("nodes") = LogTimeGrid::kDefaultNodes,
        py::arg("t_min") = py::none(), py::arg("t_max") = py::none());

  m.def("power_law_field", [](const Grid& g, double p, double lambda) { return to_array(power_law_field(g, p, lambda)); },
        py::arg("grid"), py::arg("p"), py::arg("lam"));
  m.def("trig_field", [](const Grid& g, int band, std::uint64_t seed) { return to_array(trig_field(g, band, seed)); },
        py::arg("grid"), py::arg("band"), py::arg("seed"));

  m.def("make_atom",
        [](const Grid& g, const CArray& profile, Index center, double radius, double q, double lambda) {
          const Atom a = make_atom(to_field(g, profile), make_ball(g, center, radius), q, lambda);
          const AtomCheck c = check_atom(a);
          py::dict checks;
          checks["support_ok"] = c.support_ok;
          checks["cancellation"] = c.cancellation;
          checks["size_ratio"] = c.size_ratio;
          checks["ok"] = c.ok();
          return py::make_tuple(to_array(a.field), checks);
        },
        py::arg("grid"), py::arg("profile"), py::arg("center"), py::arg("radius"), py::arg("q"), py::arg("lam"));
  m.def("pair", [](const Grid& g, const CArray& f, const CArray& h) { return pair(to_field(g, f), to_field(g, h)); },
        py::arg("grid"), py::arg("f"), py::arg("g"));

  m.def("run_command",
        [](const std::string& command, const std::string& config_json, const std::string& out_dir, int threads,
           std::optional<std::uint64_t> seed) -> py::tuple {
          ExperimentConfig cfg;
          try {
            cfg = parse_config(config_json);
          } catch (const ConfigError& e) {
            return py::make_tuple(int(kExitConfig), std::string("config error: ") + e.what() + "\n");
          }
          if (seed) cfg.seed = *seed;
          RunOptions opt;
          opt.threads = threads;
          std::ostringstream log;
          int code;
          {
            py::gil_scoped_release release;
            code = run_command(command, cfg, opt, out_dir, log);
          }
          return py::make_tuple(code, log.str());
        },
        py::arg("command"), py::arg("config_json") = "{}", py::arg("out_dir") = "out", py::arg("threads") = 0,
        py::arg("seed") = py::none());
}
