// Python bindings: reports come back as JSON text, decoded by the package wrapper.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinorbench/errors.hpp"
#include "spinorbench/report.hpp"

namespace py = pybind11;
using namespace spinorbench;

namespace {

RunConfig make_config(const std::string& command, const std::string& chart, const std::string& spinor,
                      std::optional<cplx> lambda, std::uint64_t seed, int samples,
                      const std::map<std::string, double>& tol) {
  RunConfig cfg;
  cfg.command = command;
  cfg.chart = chart;
  cfg.spinor = spinor;
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.samples = samples;
  for (const auto& [k, v] : tol) {
    cfg.tol.set(k, v);
    cfg.tol_overrides.push_back(k + "=" + dump_json(Json(v)));
  }
  return cfg;
}

py::tuple emit(const Report& r) { return py::make_tuple(dump_json(r.body), r.pass); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "spinorbench native core";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.attr("SCHEMA") = kSchema;

  m.def(
      "gamma_matrices",
      [](int p, int q) {
        const auto S = build_spinor_space(Signature(p, q));
        return py::make_tuple(S->gamma, S->beta, S->adjoint_sign);
      },
      py::arg("p"), py::arg("q"), "Clifford generators, beta and its adjoint sign for signature (p, q).");

  m.def(
      "dirac_current",
      [](int n, const CVec& phi) {
        const auto S = build_spinor_space(Signature::lorentzian(n));
        if (phi.size() != S->dim_spinor) throw InputError("spinor has the wrong dimension");
        return RVec(dirac_current(Spinor(S, phi)));
      },
      py::arg("n"), py::arg("phi"), "Frame components of the Dirac current of a Lorentzian spinor.");

  m.def(
      "classify",
      [](const std::string& op_json, std::uint64_t seed) {
        RunConfig cfg;
        cfg.command = "classify";
        cfg.seed = seed;
        return emit(classify_report(operator_from_text(op_json), cfg));
      },
      py::arg("operator_json"), py::arg("seed") = 1);

  m.def(
      "verify_killing",
      [](const std::string& chart, const std::string& spinor, std::optional<cplx> lambda, std::uint64_t seed,
         int samples, const std::map<std::string, double>& tol) {
        return emit(verify_killing_report(make_config("verify-killing", chart, spinor, lambda, seed, samples, tol)));
      },
      py::arg("chart"), py::arg("spinor"), py::arg("lambda_") = py::none(), py::arg("seed") = 1,
      py::arg("samples") = 50, py::arg("tol") = std::map<std::string, double>{});

  m.def(
      "lift_cone",
      [](const std::string& chart, const std::string& spinor, std::optional<cplx> lambda, std::uint64_t seed,
         int samples, const std::map<std::string, double>& tol) {
        return emit(lift_cone_report(make_config("lift-cone", chart, spinor, lambda, seed, samples, tol)));
      },
      py::arg("chart"), py::arg("spinor"), py::arg("lambda_") = py::none(), py::arg("seed") = 1,
      py::arg("samples") = 50, py::arg("tol") = std::map<std::string, double>{});

  m.def("catalog", [] { return dump_json(catalog_manifest()); });
}
