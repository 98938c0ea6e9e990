#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magspec/errors.hpp"
#include "magspec/green_kernel.hpp"
#include "magspec/landau.hpp"
#include "magspec/rates.hpp"
#include "magspec/run.hpp"
#include "magspec/toeplitz.hpp"
#include "magspec/verify.hpp"

namespace py = pybind11;
using namespace magspec;

namespace {

RateModel model_from(const std::string& s) {
  if (s == "linear") return RateModel::linear;
  if (s == "log") return RateModel::log;
  throw ConfigError({"model: expected linear or log, got '" + s + "'"});
}

}  // namespace

PYBIND11_MODULE(_magspec, m) {
  m.doc() = "Bindings for the magspec library";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("schema", [] { return std::string(kSchema); });

  m.def(
      "run_json",
      [](const std::string& subcommand, const std::string& config) {
        RunConfig c = config_from_json(nlohmann::json::parse(config));
        py::gil_scoped_release release;
        return run(subcommand, c).record.dump();
      },
      py::arg("subcommand"), py::arg("config") = "{}");

  m.def(
      "render",
      [](const std::string& subcommand, const std::string& config) {
        RunConfig c = config_from_json(nlohmann::json::parse(config));
        py::gil_scoped_release release;
        return run(subcommand, c).render();
      },
      py::arg("subcommand"), py::arg("config") = "{}");

  m.def(
      "verify_json",
      [](const std::string& suite) {
        py::gil_scoped_release release;
        return verify(suite).to_json().dump();
      },
      py::arg("suite"));

  m.def(
      "landau_level", [](int n, double b) { return landau_level(LevelIndex(n), MagneticField(b)); }, py::arg("n"),
      py::arg("b"));

  m.def(
      "g0",
      [](double b, std::pair<double, double> x, std::pair<double, double> y) {
        auto v = g0_integral<double>(b, Vec2<double>{x.first, x.second}, Vec2<double>{y.first, y.second});
        return std::complex<double>(v.value.re, v.value.im);
      },
      py::arg("b"), py::arg("x"), py::arg("y"));

  m.def(
      "disk_spectrum",
      [](int n, double b, double radius, int count, unsigned bits) {
        auto s = disk_spectrum(n, b, radius, count, Precision{bits});
        std::vector<std::string> out;
        for (const auto& v : s.eigenvalues) out.push_back(v.to_string(40));
        return out;
      },
      py::arg("n"), py::arg("b"), py::arg("radius"), py::arg("count"), py::arg("bits") = 512,
      "Top eigenvalues of the disk Toeplitz operator as decimal strings, descending.");

  m.def(
      "rho_sequence",
      [](const std::vector<std::string>& s, unsigned bits, int first_index) {
        std::vector<BigReal> v;
        for (const auto& x : s) v.emplace_back(x, Precision{bits});
        std::vector<double> out;
        for (const auto& r : rho_sequence(v, first_index)) out.push_back(r.to_double());
        return out;
      },
      py::arg("s"), py::arg("bits") = 512, py::arg("first_index") = 1);

  m.def(
      "extrapolate",
      [](const std::vector<double>& rho, int j_min, int j_max, int first_index, const std::string& model) {
        RateEstimate e = extrapolate(rho, RateWindow{j_min, j_max}, first_index, model_from(model));
        py::dict d;
        d["limit"] = e.limit;
        d["slope"] = e.slope;
        d["inverse"] = e.inverse;
        d["error_estimate"] = e.error_estimate;
        d["residual"] = e.residual;
        return d;
      },
      py::arg("rho"), py::arg("j_min"), py::arg("j_max"), py::arg("first_index") = 1, py::arg("model") = "linear");
}
