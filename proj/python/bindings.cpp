#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdmaq/delay.hpp"
#include "sdmaq/error.hpp"
#include "sdmaq/report.hpp"
#include "sdmaq/sim.hpp"
#include "sdmaq/stability.hpp"

namespace py = pybind11;
using namespace sdmaq;

namespace {

// nlohmann JSON -> Python, through the json module to keep this small.
py::object to_py(const report::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ArrivalLaw make_law(const std::string& kind, double value, std::vector<double> samples) {
  if (kind == "exponential") return ExponentialArrivals{value};
  if (kind == "deterministic") return DeterministicArrivals{1.0 / value};
  if (kind == "empirical") return EmpiricalArrivals{std::move(samples)};
  throw DomainError("arrival law must be exponential, deterministic or empirical");
}

sim::CsiConfig make_csi(const std::string& mode, int bits) {
  if (mode == "perfect") return sim::CsiConfig::perfect();
  if (mode == "sphere-cap") return sim::CsiConfig::sphere_cap(bits);
  if (mode == "codebook") return sim::CsiConfig::codebook(bits);
  throw DomainError("csi must be perfect, sphere-cap or codebook");
}

py::dict metrics_dict(const sim::SimMetrics& m) {
  py::dict d = to_py(report::to_json(m)).cast<py::dict>();
  d["delays"] = m.delays;
  d["waits"] = m.waits;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sdmaq, m) {
  m.doc() = "Zero-forcing SDMA stability, feedback budgets and queue simulation";

  // Translators run newest first, so DomainError is checked before Error.
  py::register_exception<Error>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](int antennas, double power, double threshold, std::optional<int> bits) {
             SystemParams p{antennas, power, threshold, bits};
             p.validate();
             return p;
           }),
           py::arg("antennas"), py::arg("power"), py::arg("threshold"), py::arg("feedback_bits") = py::none())
      .def_readonly("antennas", &SystemParams::antennas)
      .def_readonly("power", &SystemParams::power)
      .def_readonly("threshold", &SystemParams::threshold)
      .def_readonly("feedback_bits", &SystemParams::feedback_bits)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(antennas=" + std::to_string(p.antennas) + ", power=" + std::to_string(p.power) +
               ", threshold=" + std::to_string(p.threshold) + ")";
      });

  m.def("db_to_linear", &db_to_linear);
  m.def("regularized_upper_gamma",
        [](int shape, double x) { return regularized_upper_gamma(shape, x).value(); });

  // stability
  m.def("departure_rate", [](const SystemParams& p, int k) { return departure_rate(p, k).value(); });
  m.def("departure_rates", &departure_rates);
  m.def("index_set", &index_set);
  m.def("stability_polytope", [](const SystemParams& p) { return to_py(report::to_json(stability_polytope(p))); },
        "Polytope document: params, index_set, d, vertices, vertex_decisions, max_sum_rate.");
  m.def("contains", [](const SystemParams& p, std::vector<double> lam, double tol) {
          return contains(stability_polytope(p), lam, tol);
        }, py::arg("params"), py::arg("rates"), py::arg("tol") = 1e-9);
  m.def("decompose", [](const SystemParams& p, std::vector<double> lam) {
          const auto policy = decompose(stability_polytope(p), lam);
          return std::vector<double>(policy.weights().begin(), policy.weights().end());
        }, "Time-sharing weights indexed by decision bitmask.");
  m.def("boundary_scale", [](const SystemParams& p, std::vector<double> dir) {
    return boundary_scale(stability_polytope(p), dir);
  });
  m.def("max_weight_decision", [](const SystemParams& p, std::vector<std::int64_t> q) {
    return max_weight_decision(p, q).bits();
  });
  m.def("power_region_sample", &power_region_sample, py::arg("params"), py::arg("resolution") = 32);

  // delay
  m.def("kappa", &kappa);
  m.def("feedback_bits_for_delta", [](const SystemParams& p, double delta) {
    const auto b = feedback_bits_for_delta(p, delta);
    return py::dict(py::arg("delta") = b.delta, py::arg("kappa") = b.kappa,
                    py::arg("bits_real") = b.bits_real, py::arg("bits") = b.bits);
  });
  m.def("delta_for_bits", &delta_for_bits);
  m.def("bits_for_eta", [](const SystemParams& p, double eta) {
    const auto b = bits_for_eta(p, eta);
    return py::dict(py::arg("eta") = b.eta, py::arg("kappa") = b.kappa,
                    py::arg("bits_real") = b.bits_real, py::arg("bits") = b.bits);
  });
  m.def("pk_average_delay", &pk_average_delay, py::arg("arrival_rate"), py::arg("service"));
  m.def("delta_for_delay_ratio", [](double ratio, double tau, const std::string& variant) {
          return delta_for_delay_ratio(ratio, tau,
                                       variant == "proposition" ? DeltaVariant::kProposition : DeltaVariant::kAppendix);
        }, py::arg("ratio"), py::arg("tau"), py::arg("variant") = "appendix");
  m.def("delay_ratio_bound", &delay_ratio_bound, py::arg("delta"), py::arg("tau"));
  m.def("kingman_exponent", [](double service, const std::string& law, double rate, std::vector<double> samples) {
          const auto k = kingman_exponent(make_law(law, rate, std::move(samples)), service);
          return py::dict(py::arg("exponent") = k.exponent, py::arg("residual") = k.residual,
                          py::arg("window_upper") = k.window_upper);
        }, py::arg("service"), py::arg("law") = "exponential", py::arg("rate") = 0.0,
        py::arg("samples") = std::vector<double>{});
  m.def("perturbation_coefficient",
        [](double service, double exponent, const std::string& law, double rate, std::vector<double> samples) {
          return perturbation_coefficient(make_law(law, rate, std::move(samples)), service, exponent);
        }, py::arg("service"), py::arg("exponent"), py::arg("law") = "exponential", py::arg("rate") = 0.0,
        py::arg("samples") = std::vector<double>{});

  // simulation
  m.def("estimate_departure_rate",
        [](const SystemParams& p, int k, const std::string& csi, int bits, std::int64_t slots, std::uint64_t seed) {
          RngStream rng(seed);
          const auto e = sim::estimate_departure_rate(p, k, make_csi(csi, bits), slots, rng);
          return py::dict(py::arg("estimate") = e.estimate, py::arg("std_error") = e.std_error,
                          py::arg("trials") = e.trials);
        }, py::arg("params"), py::arg("k"), py::arg("csi") = "perfect", py::arg("bits") = 0,
        py::arg("slots") = 100000, py::arg("seed") = 1);
  m.def("simulate",
        [](const SystemParams& p, std::vector<double> rates, const std::string& csi, int bits,
           std::optional<std::vector<int>> schedule, std::int64_t horizon, std::uint64_t seed,
           const std::string& arrival) {
          sim::SimConfig c;
          c.params = p;
          c.csi = make_csi(csi, bits);
          if (rates.size() == 1) rates.assign(static_cast<std::size_t>(p.antennas), rates.front());
          for (double r : rates) {
            c.arrivals.push_back(arrival == "deterministic" ? sim::ArrivalProcess::deterministic(r)
                                                            : sim::ArrivalProcess::poisson(r));
          }
          if (schedule) c.policy = sim::FixedPolicy{DecisionVector::from_bits(*schedule)};
          c.horizon = horizon;
          c.seed = seed;
          sim::SimMetrics metrics;
          {
            py::gil_scoped_release release;
            metrics = sim::run(c);
          }
          return metrics_dict(metrics);
        },
        py::arg("params"), py::arg("rates"), py::arg("csi") = "perfect", py::arg("bits") = 0,
        py::arg("schedule") = py::none(), py::arg("horizon") = 100000, py::arg("seed") = 1,
        py::arg("arrival") = "poisson",
        "Runs the slotted simulator. Max-weight control unless a fixed `schedule` (L bits) is given.");
  m.def("single_queue",
        [](double arrival_rate, double service, std::int64_t horizon, std::uint64_t seed) {
          return metrics_dict(sim::run(sim::single_queue_config(arrival_rate, service, horizon, seed)));
        }, py::arg("arrival_rate"), py::arg("service"), py::arg("horizon") = 100000, py::arg("seed") = 1);

  m.attr("__version__") = "0.3.0";
}
