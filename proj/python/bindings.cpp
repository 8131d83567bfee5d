#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "holowave/cli/commands.hpp"
#include "holowave/errors.hpp"
#include "holowave/morawetz.hpp"

namespace py = pybind11;
using namespace holowave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

SpectralField field(const Grid& g, const Array& a) {
  if (a.ndim() != 1 || a.shape(0) != g.size()) throw InvalidArgument("expected a 1-d array of length n");
  return SpectralField::from_samples(g, std::span<const double>(a.data(), a.shape(0)));
}

py::dict report_dict(const NormReport& r) {
  return py::dict(py::arg("constant") = r.constant, py::arg("constant_defined") = r.constant_defined,
                  py::arg("le_squared") = r.le.squared, py::arg("le_center") = r.le.center,
                  py::arg("e14_initial_squared") = r.e14_initial.squared(),
                  py::arg("e14_final_squared") = r.e14_final.squared(), py::arg("e0") = r.e0,
                  py::arg("xkappa") = r.xkappa.total(), py::arg("bands") = r.xkappa.bands,
                  py::arg("envelope") = r.envelope, py::arg("gate_passed") = r.gate_passed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gravity-capillary water waves in holomorphic coordinates";

  // The most recently registered translator is tried first, so the base
  // class goes first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BlowUp>(m, "BlowUp", base.ptr());

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<double, double, double>(), py::arg("g") = 1.0, py::arg("kappa") = 0.0,
           py::arg("h") = kInfiniteDepth)
      .def_property_readonly("g", &PhysicalParams::g)
      .def_property_readonly("kappa", &PhysicalParams::kappa)
      .def_property_readonly("h", &PhysicalParams::h)
      .def_property_readonly("bond", &PhysicalParams::bond)
      .def("__repr__", [](const PhysicalParams& p) {
        return "PhysicalParams(g=" + std::to_string(p.g()) + ", kappa=" + std::to_string(p.kappa()) +
               ", h=" + std::to_string(p.h()) + ")";
      });

  py::class_<WaveState>(m, "WaveState")
      .def_readonly("t", &WaveState::t)
      .def_readonly("level", &WaveState::level)
      .def_readonly("params", &WaveState::params)
      .def_property_readonly("n", [](const WaveState& s) { return s.grid().size(); })
      .def_property_readonly("length", [](const WaveState& s) { return s.grid().length(); })
      .def("x", [](const WaveState& s) {
        std::vector<double> x(s.grid().size());
        for (int i = 0; i < s.grid().size(); ++i) x[i] = s.grid().point(i);
        return to_array(x);
      })
      .def("eulerian", [](const WaveState& s) {
        auto [eta, psi] = eulerian_surface(s);
        return py::make_tuple(to_array(eta.real_samples()), to_array(psi.real_samples()));
      }, "Surface elevation and potential on the x grid.")
      .def("hamiltonian", [](const WaveState& s) { return hamiltonian(s); })
      .def("momentum", [](const WaveState& s) { return momentum(s); });

  m.def("state_from_eulerian",
        [](const Array& eta, const Array& psi, double length, const PhysicalParams& p) {
          Grid g(static_cast<int>(eta.shape(0)), length);
          return state_from_eulerian(field(g, eta), field(g, psi), p);
        },
        py::arg("eta"), py::arg("psi"), py::arg("length"), py::arg("params"));

  m.def("initial_state",
        [](const std::string& config_json) {
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(config_json, nullptr, true, true);
          } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(e.what());
          }
          return cli::initial_state(cli::parse_run_config(j));
        },
        py::arg("config_json"), "Initial state of a run config given as JSON text.");

  m.def("step",
        [](const WaveState& s, double dt) {
          StepperConfig c;
          c.dt = dt;
          return step(s, c);
        },
        py::arg("state"), py::arg("dt") = 0.0, "One filtered RK4 step (dt = 0 picks a stable one).");

  m.def("simulate",
        [](const WaveState& s0, double t_final, double dt, int cadence) {
          StepperConfig c;
          c.dt = dt;
          SimulateOptions o;
          o.t_final = t_final;
          o.cadence = cadence;
          py::gil_scoped_release release;
          return simulate(s0, c, o).snapshots;
        },
        py::arg("state"), py::arg("t_final"), py::arg("dt") = 0.0, py::arg("cadence") = 1,
        "Snapshots every `cadence` steps, including both ends.");

  m.def("dispersion_omega",
        [](double k, const PhysicalParams& p) { return dispersion_omega(k, p); }, py::arg("k"), py::arg("params"));

  m.def("frequency_envelope",
        [](const std::vector<double>& a, double delta) { return frequency_envelope(a, delta); }, py::arg("bands"),
        py::arg("delta") = 0.1);

  m.def("empirical_constant",
        [](const std::vector<WaveState>& traj, double spacing) {
          NormOptions o;
          o.spacing = spacing;
          NormReport r;
          {
            py::gil_scoped_release release;
            r = empirical_constant(traj, o);
          }
          return report_dict(r);
        },
        py::arg("trajectory"), py::arg("spacing") = 0.5);

  m.def("time_rescaled", &time_rescaled, py::arg("trajectory"), py::arg("lambda_"));

  m.def("verify",
        [](const std::string& suite, const std::string& profile) {
          cli::VerifyOptions o;
          o.profile = cli::ToleranceProfile::named(profile);
          py::list out;
          for (const auto& c : cli::run_suite(suite, o))
            out.append(py::dict(py::arg("suite") = c.suite, py::arg("name") = c.name, py::arg("op") = c.op,
                                py::arg("measured") = c.measured, py::arg("tolerance") = c.tolerance,
                                py::arg("passed") = c.passed));
          return out;
        },
        py::arg("suite") = "operators", py::arg("profile") = "default");

  m.attr("__version__") = "0.1.0";
}
