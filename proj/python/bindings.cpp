// Python bindings. Parameters are passed as keyword arguments using the same
// keys as the preset files (ns, mu, nu, r, pc, gamma_s_db, chi2_db, ...).
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latcr/errors.hpp"
#include "latcr/experiment.hpp"
#include "latcr/markov.hpp"
#include "latcr/power.hpp"
#include "latcr/qfunc.hpp"

namespace py = pybind11;
using namespace latcr;

namespace {

ExperimentParams params_from(const py::kwargs& kw) {
    ExperimentParams p;
    for (auto item : kw) {
        const auto key = py::cast<std::string>(item.first);
        const auto value = py::cast<std::string>(py::str(item.second));
        if (!p.set(key, value)) throw py::key_error("unknown parameter '" + key + "'");
    }
    return p;
}

py::dict analytic_dict(const AnalyticFields& a) {
    py::dict d;
    d["pm"] = a.pm;
    d["pf0"] = a.pf0;
    d["pf1"] = a.pf1;
    d["eps0"] = a.eps0;
    d["eps1"] = a.eps1;
    d["pc"] = a.pc;
    d["pw"] = a.pw;
    d["c"] = a.c;
    d["dc"] = a.dc;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Listen-and-talk cognitive radio analysis";
    m.attr("__version__") = kVersion;

    static py::exception<Error> error(m, "LatcrError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    m.def("q", &q, py::arg("x"));
    m.def("q_inv", &q_inv, py::arg("p"));

    m.def("analyze", [](const py::kwargs& kw) { return analytic_dict(analyze(params_from(kw))); },
          "Analytic result row for the given parameters.");

    m.def("simulate",
          [](std::int64_t slots, std::uint64_t seed, const std::string& mode, const py::kwargs& kw) {
              require(mode == "sample_level" || mode == "slot_statistical",
                      "mode must be sample_level or slot_statistical");
              const ExperimentParams p = params_from(kw);
              const SimMode sm = mode == "sample_level" ? SimMode::SampleLevel : SimMode::SlotStatistical;
              const SimulatedFields r = [&] {
                  py::gil_scoped_release release;
                  return simulate(p, slots, seed, sm);
              }();
              py::dict d;
              d["empirical_pc"] = r.metrics.empirical_pc;
              d["empirical_pc_se"] = r.metrics.pc_se;
              d["empirical_pw"] = r.metrics.empirical_pw;
              d["empirical_pw_se"] = r.metrics.pw_se;
              d["throughput"] = r.metrics.throughput;
              d["hole_throughput"] = r.metrics.hole_throughput;
              return d;
          },
          py::arg("slots") = 100000, py::arg("seed") = 1, py::arg("mode") = "slot_statistical");

    m.def("steady_state",
          [](double pf0, double pm0, double pf1, double pm1, double mu, double nu) {
              const SteadyState s = steady_state_closed_form(ErrorProfile(pf0, pm0, pf1, pm1),
                                                             TransitionProbs(mu, nu));
              return std::vector<double>(s.p.begin(), s.p.end());
          },
          py::arg("pf0"), py::arg("pm0"), py::arg("pf1"), py::arg("pm1"), py::arg("mu"), py::arg("nu"));

    m.def("optimal_power",
          [](const py::kwargs& kw) {
              const ExperimentParams p = params_from(kw);
              const RadioParams radio = p.radio();
              const TransitionProbs probs = p.probs();
              const double pm = required_pm(p.pc, probs, p.pm_mode, radio);
              const OptimalPowerResult r =
                  optimal_power(radio, probs, pm, PowerSearch::defaults(radio.sigma_u2()));
              auto db = [&](const std::optional<double>& v) -> std::optional<double> {
                  if (!v) return std::nullopt;
                  return linear_to_db(*v / radio.sigma_u2());
              };
              py::dict d;
              d["exists"] = r.exists;
              d["local_max_db"] = db(r.local_max);
              d["local_min_db"] = db(r.local_min);
              d["c_at_max"] = r.c_at_max;
              return d;
          },
          "Local optima of throughput over sigma_s2/sigma_u2 in dB.");
}
