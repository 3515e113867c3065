#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hocpoles/crossings.hpp"
#include "hocpoles/error.hpp"
#include "hocpoles/hoc_acf.hpp"
#include "hocpoles/model.hpp"
#include "hocpoles/myw.hpp"
#include "hocpoles/pipeline.hpp"
#include "hocpoles/poles.hpp"

namespace py = pybind11;
using namespace hocpoles;

namespace {

CrossingConfig make_crossing_config(int levels, const std::string& mean, double fixed_level,
                                    std::uint64_t mean_warmup, std::optional<double> ewma) {
  CrossingConfig c;
  c.levels = levels;
  c.mean_mode = mean_mode_from_string(mean);
  c.fixed_level = fixed_level;
  c.mean_warmup = mean_warmup;
  c.ewma_lambda = ewma;
  c.validate();
  return c;
}

RunConfig make_run_config(int n, int m, std::optional<int> levels, const std::string& mean, double fixed_level,
                          std::uint64_t mean_warmup, std::optional<double> ewma, bool use_ewma,
                          std::optional<int> k_start, double dt, double zeta_threshold) {
  RunConfig c;
  c.n = n;
  c.m = m;
  c.levels = levels;
  c.mean_mode = mean_mode_from_string(mean);
  c.fixed_level = fixed_level;
  c.mean_warmup = mean_warmup;
  c.ewma_lambda = ewma;
  c.use_ewma = use_ewma;
  c.k_start = k_start;
  c.dt = dt;
  c.zeta_threshold = zeta_threshold;
  c.validate();
  return c;
}

py::dict counts_dict(const HocCounts& c) {
  py::dict d;
  d["d"] = c.d;
  d["d_tilde"] = c.d_tilde;
  d["valid"] = c.valid;
  d["n"] = c.n;
  return d;
}

py::dict acf_dict(const AcfSequence& a) {
  py::dict d;
  d["rho"] = a.rho;
  d["clamped"] = a.clamped;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hocpoles, m) {
  m.doc() = "Higher-order crossings pole estimation";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<UnstableModel>(m, "UnstableModel", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IllConditioned>(m, "IllConditioned", numerical.ptr());
  py::register_exception<RootFindingError>(m, "RootFindingError", numerical.ptr());

  m.def(
      "simulate",
      [](const std::vector<double>& num, const std::vector<double>& den, std::size_t count, std::uint64_t seed,
         double variance, std::size_t warmup, bool force) {
        return generate_arma({num, den}, {seed, variance, count}, {warmup, force});
      },
      py::arg("num"), py::arg("den"), py::arg("count"), py::arg("seed") = 0, py::arg("variance") = 1.0,
      py::arg("warmup") = 100, py::arg("force") = false, "Seeded ARMA samples num/den driven by Gaussian noise.");

  m.def(
      "closed_loop",
      [](double alpha, int delay, double kc, double dt) {
        const auto spec = closed_loop_to_arma({alpha, delay, kc, dt});
        return py::make_tuple(spec.num, spec.den);
      },
      py::arg("alpha") = 0.9, py::arg("delay") = 2, py::arg("kc") = 0.1, py::arg("dt") = 1.0,
      "(num, den) of the integrating-control loop.");

  m.def(
      "analytic_acf",
      [](const std::vector<double>& num, const std::vector<double>& den, std::size_t max_lag) {
        return analytic_acf({num, den}, max_lag).rho;
      },
      py::arg("num"), py::arg("den"), py::arg("max_lag"));

  py::class_<HocState>(m, "HocState")
      .def(py::init([](int levels, const std::string& mean, double fixed_level, std::uint64_t mean_warmup,
                       std::optional<double> ewma) {
             return HocState(make_crossing_config(levels, mean, fixed_level, mean_warmup, ewma));
           }),
           py::arg("levels") = 2, py::arg("mean") = "zero", py::arg("fixed_level") = 0.0, py::arg("mean_warmup") = 50,
           py::arg("ewma") = py::none())
      .def("ingest", [](HocState& s, double y) { s.ingest(y); }, py::arg("y"))
      .def("ingest_many", [](HocState& s, const std::vector<double>& ys) { s.ingest(ys); }, py::arg("ys"))
      .def(
          "counts",
          [](const HocState& s, bool ewma) {
            return counts_dict(s.snapshot(ewma ? CountSource::Ewma : CountSource::Cumulative));
          },
          py::arg("ewma") = false)
      .def_property_readonly("samples", &HocState::samples)
      .def("to_json", [](const HocState& s, const std::string& context) { return state_to_json(s, context); },
           py::arg("context") = "")
      .def(py::self == py::self)
      .def_static(
          "from_json",
          [](const std::string& text, int levels, const std::string& mean, double fixed_level,
             std::uint64_t mean_warmup, std::optional<double> ewma, const std::string& context) {
            return state_from_json(text, make_crossing_config(levels, mean, fixed_level, mean_warmup, ewma), context);
          },
          py::arg("text"), py::arg("levels") = 2, py::arg("mean") = "zero", py::arg("fixed_level") = 0.0,
          py::arg("mean_warmup") = 50, py::arg("ewma") = py::none(), py::arg("context") = "");

  m.def(
      "acf_from_hoc", [](const std::vector<double>& d_tilde, int max_lag) { return acf_dict(acf_from_hoc(d_tilde, max_lag)); },
      py::arg("d_tilde"), py::arg("max_lag"));
  m.def(
      "hoc_from_acf",
      [](const std::vector<double>& rho, int levels) { return hoc_from_acf(AcfSequence::from_lags(rho), levels); },
      py::arg("rho"), py::arg("levels"));
  m.def(
      "psi_phi",
      [](int k, const std::vector<double>& rho) {
        const auto p = psi_phi(k, AcfSequence::from_lags(rho));
        return py::make_tuple(p.psi, p.phi);
      },
      py::arg("k"), py::arg("rho"));

  m.def(
      "batch_acf", [](const std::vector<double>& y, std::size_t max_lag) { return batch_acf(y, max_lag).rho; },
      py::arg("y"), py::arg("max_lag"));
  m.def(
      "solve_myw",
      [](const std::vector<double>& rho, int n, int m, std::optional<int> k_start) {
        const auto est = solve_myw(AcfSequence::from_lags(rho), n, m, {k_start});
        py::dict d;
        d["a"] = est.a;
        d["k_start"] = est.k_start;
        d["cond"] = est.cond;
        d["ill_conditioned"] = est.ill_conditioned;
        return d;
      },
      py::arg("rho"), py::arg("n"), py::arg("m"), py::arg("k_start") = py::none());

  m.def(
      "find_roots", [](const std::vector<double>& coeffs) { return find_roots(coeffs); }, py::arg("coeffs"),
      "Roots of the monic polynomial coeffs[0] z^n + ... + coeffs[n].");
  m.def("to_continuous", &to_continuous, py::arg("p_z"), py::arg("dt") = 1.0);
  m.def("damping_conjugate", &damping_conjugate, py::arg("p_s"));
  m.def("damping_real_pair", &damping_real_pair, py::arg("p1"), py::arg("p2"));

  m.def(
      "_estimate_json",
      [](const std::vector<double>& y, int n, int m, std::optional<int> levels, const std::string& mean,
         double fixed_level, std::uint64_t mean_warmup, std::optional<double> ewma, bool use_ewma,
         std::optional<int> k_start, double dt, double zeta_threshold, bool batch) {
        const auto cfg =
            make_run_config(n, m, levels, mean, fixed_level, mean_warmup, ewma, use_ewma, k_start, dt, zeta_threshold);
        if (batch) return report_to_json(batch_report(y, cfg));
        HocState s(cfg.crossing_config());
        s.ingest(y);
        return report_to_json(report_from_state(s, cfg));
      },
      py::arg("y"), py::arg("n"), py::arg("m"), py::arg("levels"), py::arg("mean"), py::arg("fixed_level"),
      py::arg("mean_warmup"), py::arg("ewma"), py::arg("use_ewma"), py::arg("k_start"), py::arg("dt"),
      py::arg("zeta_threshold"), py::arg("batch"));
}
