#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "lcm/envelope.hpp"
#include "lcm/json_io.hpp"
#include "lcm/khintchine.hpp"

namespace py = pybind11;
using namespace lcm;

namespace {

Sign sign_of(const std::string& s) {
  if (s == "+") return Sign::Plus;
  if (s == "-") return Sign::Minus;
  throw DomainError("sign must be '+' or '-'");
}

// results cross the boundary as JSON text; the Python side parses it
std::string moments(const std::string& fn, const std::vector<double>& p) {
  return dump(to_json(moment_map(any_fn_from_json(json::parse(fn)), ExponentTuple(p))));
}

std::string invert(const std::string& sign, const std::vector<double>& p, const std::vector<double>& targets) {
  return dump(to_json(match_moments(sign_of(sign), ExponentTuple(p), MomentVector(targets))));
}

std::string envelope_json(const std::vector<double>& p, const std::vector<double>& m) {
  return dump(to_json(envelope(ExponentTuple(p), MomentVector(m))));
}

std::string constants(double p, double q, int n) {
  return dump(to_json(n > 0 ? constants_fixed_n(p, q, n) : constants_asymptotic(p, q)));
}

std::tuple<int, std::string, std::string> run(std::vector<std::string> args) {
  args.insert(args.begin(), "lcm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> base(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<NotEmbeddable>(m, "NotEmbeddable", base.ptr());
  py::register_exception<Diverges>(m, "Diverges", base.ptr());

  m.def("moments", &moments, py::arg("fn"), py::arg("exponents"));
  m.def("invert", &invert, py::arg("sign"), py::arg("exponents"), py::arg("targets"));
  m.def("envelope", &envelope_json, py::arg("exponents"), py::arg("constraints"));
  m.def("constants", &constants, py::arg("p"), py::arg("q"), py::arg("n") = 0);
  m.def("gamma_p", &gamma_p, py::arg("p"));
  m.def("run", &run, py::arg("args"));
}
