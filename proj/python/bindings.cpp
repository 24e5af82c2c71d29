#include "rmono/report.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rmono;

namespace {

RunConfig make_config(const std::string& system, const std::vector<double>& base, const std::vector<double>& window,
                      const std::vector<int>& res, std::uint64_t seed, std::optional<double> tol_real,
                      std::optional<double> tol_sing, std::optional<double> tol_match, const std::string& labels,
                      const std::string& loops) {
  RunConfig c;
  c.system = system;
  c.base = base;
  c.window = window;
  c.res = res;
  c.seed = seed;
  c.tol_real = tol_real;
  c.tol_sing = tol_sing;
  c.match_radius = tol_match;
  c.labels_file = labels;
  c.loops_file = loops;
  return c;
}

// Stages can take seconds; let other Python threads run meanwhile.
template <class F>
std::string released(F&& f) {
  py::gil_scoped_release nogil;
  return f();
}

CPoint to_cpoint(const std::vector<Complex>& v) {
  return Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Complex> to_list(const CVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

PYBIND11_MODULE(_rmono, m) {
  m.doc() = "Real monodromy of parameterized polynomial systems";
  m.attr("__version__") = version_string();

  static py::exception<Error> numerical(m, "NumericalError", PyExc_RuntimeError);
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DimensionError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Error& e) {
      numerical(e.what());
    }
  });

  py::class_<Session>(m, "Session")
      .def(py::init([](const std::string& system, const std::vector<double>& base, const std::vector<double>& window,
                       const std::vector<int>& res, std::uint64_t seed, std::optional<double> tol_real,
                       std::optional<double> tol_sing, std::optional<double> tol_match, const std::string& labels,
                       const std::string& loops) {
             return std::make_unique<Session>(
                 make_config(system, base, window, res, seed, tol_real, tol_sing, tol_match, labels, loops));
           }),
           py::arg("system") = "ex21", py::arg("base") = std::vector<double>{},
           py::arg("window") = std::vector<double>{}, py::arg("res") = std::vector<int>{}, py::arg("seed") = 7,
           py::arg("tol_real") = py::none(), py::arg("tol_sing") = py::none(), py::arg("tol_match") = py::none(),
           py::arg("labels") = "", py::arg("loops") = "")
      .def_property_readonly("system_name", &Session::system_name)
      .def_property_readonly("config", [](const Session& s) { return dump_json(s.config().echo()); })
      .def("solve_json", [](Session& s) { return released([&] { return dump_json(s.solve_json()); }); })
      .def("cgroup_json", [](Session& s) { return released([&] { return dump_json(s.cgroup_json()); }); })
      .def("regions_json", [](Session& s) { return released([&] { return dump_json(s.regions_json()); }); })
      .def("rstruct_json", [](Session& s) { return released([&] { return dump_json(s.rstruct_json()); }); })
      .def("regions_svg", [](Session& s) { return released([&] { return s.regions_svg(); }); })
      .def("rstruct_text", [](Session& s) { return released([&] { return s.rstruct_text(); }); });

  m.def("builtins", [] {
    std::vector<std::string> names;
    for (Builtin b : all_builtins()) names.push_back(builtin_name(b));
    return names;
  });
  m.def(
      "print_system", [](const std::string& text) { return print_system(parse_system(text)); }, py::arg("text"),
      "Parses a system and prints it back in canonical form.");
  m.def(
      "evaluate",
      [](const std::string& system, const std::vector<Complex>& x, const std::vector<Complex>& p) {
        return to_list(evaluate(builtin(builtin_from_name(system)), to_cpoint(x), to_cpoint(p)));
      },
      py::arg("system"), py::arg("x"), py::arg("p"));
  m.def(
      "strip_timing", [](const std::string& text) { return dump_json(strip_timing(Json::parse(text))); },
      py::arg("text"));
}
