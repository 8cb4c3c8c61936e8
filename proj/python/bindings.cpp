#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fraclap/cli.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/fit.hpp"
#include "fraclap/rates.hpp"
#include "fraclap/spectra.hpp"
#include "fraclap/symbols.hpp"
#include "fraclap/verify.hpp"

namespace py = pybind11;
using namespace fraclap;

namespace {

py::object exact(const std::optional<Rational>& q) {
  return q ? py::object(py::str(q->to_string())) : py::object(py::none());
}

py::object term(const TermRate& t) {
  return t.exponential ? py::object(py::str("exponential")) : py::object(py::float_(t.exponent));
}

py::dict prediction_dict(const DecayPrediction& d) {
  py::dict out;
  out["kind"] = d.kind == DecayKind::exponential ? "exponential" : "polynomial";
  out["exponent"] = d.kind == DecayKind::exponential ? py::object(py::none()) : py::float_(d.exponent);
  out["exponent_exact"] = exact(d.exact_exponent);
  out["v0_low"] = term(d.v0_low);
  out["v1_low"] = term(d.v1_low);
  out["high"] = term(d.high);
  out["required_s"] = d.required_s;
  out["required_r"] = d.required_r;
  out["s_exact"] = exact(d.exact_s);
  out["r_exact"] = exact(d.exact_r);
  out["beta"] = d.beta ? py::object(py::float_(*d.beta)) : py::object(py::none());
  out["case_label"] = d.case_label;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decay rates and kernels of a v_tt + b v_t + c v = 0 with fractional symbols";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<HypothesisNotMet>(m, "HypothesisNotMet", base.ptr());
  py::register_exception<InvalidParameters>(m, "InvalidParameters", base.ptr());

  py::class_<CanonicalParams>(m, "CanonicalParams")
      .def(py::init<double, double, double, int>(), py::arg("delta"), py::arg("alpha"),
           py::arg("theta"), py::arg("n"))
      .def_readonly("delta", &CanonicalParams::delta)
      .def_readonly("alpha", &CanonicalParams::alpha)
      .def_readonly("theta", &CanonicalParams::theta)
      .def_readonly("n", &CanonicalParams::n)
      .def("real_branch", &CanonicalParams::real_branch)
      .def("regularity_loss", &CanonicalParams::regularity_loss);

  py::class_<SymbolTriple>(m, "SymbolTriple")
      .def_static("canonical", &SymbolTriple::canonical, py::arg("params"))
      .def_static("parse",
                  [](const std::string& a, const std::optional<std::string>& b, const std::string& c) {
                    std::optional<GeneralSymbol> gb;
                    if (b) gb = GeneralSymbol::parse(*b);
                    return SymbolTriple(GeneralSymbol::parse(a), std::move(gb), GeneralSymbol::parse(c));
                  },
                  py::arg("a"), py::arg("b"), py::arg("c"))
      .def("inertia", &SymbolTriple::inertia)
      .def("damping", &SymbolTriple::damping)
      .def("stiffness", &SymbolTriple::stiffness)
      .def("__repr__", &SymbolTriple::to_string);

  m.def("preset_names", &preset_names);
  m.def("preset_symbols", &preset_symbols, py::arg("name"), py::arg("theta"),
        py::arg("literal_delta0") = false);
  m.def("eigenvalues",
        [](const SymbolTriple& s, double r) {
          const Eigenpair e = eigenvalues(s, r);
          return py::make_tuple(e.lambda_plus, e.lambda_minus, e.degenerate);
        },
        py::arg("sym"), py::arg("r"));
  m.def("solution_hat",
        [](const SymbolTriple& s, double t, double r, complex v0, complex v1) {
          const ModeValue v = solution_hat(s, t, r, v0, v1);
          return py::make_tuple(v.v, v.vt);
        },
        py::arg("sym"), py::arg("t"), py::arg("r"), py::arg("v0hat"), py::arg("v1hat"));
  m.def("split_epsilon", &split_epsilon, py::arg("sym"), py::arg("n"));

  m.def("predict",
        [](const SymbolTriple& s, int n, const std::string& target, int gamma,
           std::optional<double> beta) {
          return prediction_dict(combined_rate(RateQuery::general(s, n, parse_target(target), gamma, beta)));
        },
        py::arg("sym"), py::arg("n"), py::arg("target") = "v", py::arg("gamma") = 0,
        py::arg("beta") = py::none());

  m.def("norm_curve",
        [](const SymbolTriple& s, int n, double width, int j, int gamma, double t_min,
           double t_max, std::size_t points, unsigned threads) {
          const auto g = RadialProfile::gaussian(width);
          const DecayCurve c =
              generate_curve(CurveQuery::norm(s, n, g, g, j, gamma), t_min, t_max, points, threads);
          return py::make_tuple(c.times, c.values);
        },
        py::arg("sym"), py::arg("n"), py::arg("width") = 1.0, py::arg("j") = 0,
        py::arg("gamma") = 0, py::arg("t_min") = 1e2, py::arg("t_max") = 1e4,
        py::arg("points") = 24, py::arg("threads") = 0);

  m.def("fit_loglog",
        [](std::vector<double> times, std::vector<double> values, double tail) {
          const RateFit f = fit_loglog(DecayCurve{std::move(times), std::move(values), ""}, tail);
          py::dict out;
          out["slope"] = f.slope;
          out["exponent"] = f.exponent;
          out["r_squared"] = f.r_squared;
          out["curvature"] = f.curvature;
          out["classification"] = to_string(f.classification);
          out["tail_points"] = f.tail_points;
          return out;
        },
        py::arg("times"), py::arg("values"), py::arg("tail") = 0.5);

  m.def("verify",
        [](const std::string& preset, double theta, int n, std::size_t samples, std::uint64_t seed) {
          VerifyConfig cfg{preset_symbols(preset, theta), n, preset, samples, seed, 1};
          return verification_json(preset, run_verification(cfg));
        },
        py::arg("preset"), py::arg("theta"), py::arg("n"), py::arg("samples") = 1000,
        py::arg("seed") = 0);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "fraclap");
          std::ostringstream out, err;
          const int code = run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
