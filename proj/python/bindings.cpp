#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "closedweigh/config.hpp"
#include "closedweigh/disc.hpp"
#include "closedweigh/harness.hpp"
#include "closedweigh/measurement.hpp"
#include "closedweigh/weighing.hpp"

namespace py = pybind11;
namespace cw = closedweigh;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Closed-system measurement simulations";
  mod.attr("__version__") = "0.1.0";

  auto base = py::register_exception<cw::Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<cw::ContractViolation>(mod, "ContractViolation", base.ptr());
  py::register_exception<cw::Refusal>(mod, "Refusal", base.ptr());
  py::register_exception<cw::SingularityError>(mod, "SingularityError", base.ptr());
  py::register_exception<cw::NumericalContractFailure>(mod, "NumericalContractFailure", base.ptr());
  py::register_exception<cw::InvariantViolation>(mod, "InvariantViolation", base.ptr());
  py::register_exception<cw::ConfigError>(mod, "ConfigError", base.ptr());
  py::register_exception<cw::IoError>(mod, "IoError", base.ptr());

  py::enum_<cw::ProfileShape>(mod, "ProfileShape")
      .value("raised_cosine", cw::ProfileShape::raised_cosine)
      .value("smoothstep_bump", cw::ProfileShape::smoothstep_bump);

  py::class_<cw::ScenarioParams>(mod, "ScenarioParams")
      .def(py::init<>())
      .def_readwrite("box_energy", &cw::ScenarioParams::box_energy)
      .def_readwrite("total_energy", &cw::ScenarioParams::total_energy)
      .def_readwrite("t_start", &cw::ScenarioParams::t_start)
      .def_readwrite("duration", &cw::ScenarioParams::duration)
      .def_readwrite("shape", &cw::ScenarioParams::shape)
      .def_readwrite("pointer_center", &cw::ScenarioParams::pointer_center)
      .def_readwrite("pointer_width", &cw::ScenarioParams::pointer_width)
      .def_readwrite("tau_points", &cw::ScenarioParams::tau_points)
      .def_readwrite("z_points", &cw::ScenarioParams::z_points)
      .def_readwrite("hbar", &cw::ScenarioParams::hbar);

  py::class_<cw::ReadoutReport>(mod, "ReadoutReport")
      .def_readonly("mean_shift", &cw::ReadoutReport::mean_shift)
      .def_readonly("bias", &cw::ReadoutReport::bias)
      .def_readonly("spread", &cw::ReadoutReport::spread)
      .def_readonly("pointer_dp", &cw::ReadoutReport::pointer_dp)
      .def_readonly("success", &cw::ReadoutReport::success)
      .def_readonly("duration_product", &cw::ReadoutReport::duration_product)
      .def_readonly("max_abs_gz", &cw::ReadoutReport::max_abs_gz);

  py::class_<cw::DurationSweepRecord>(mod, "DurationSweepRecord")
      .def_readonly("duration", &cw::DurationSweepRecord::duration)
      .def_readonly("pointer_width", &cw::DurationSweepRecord::pointer_width)
      .def_readonly("valid", &cw::DurationSweepRecord::valid)
      .def_readonly("success", &cw::DurationSweepRecord::success)
      .def_readonly("mean_shift", &cw::DurationSweepRecord::mean_shift)
      .def_readonly("bias", &cw::DurationSweepRecord::bias)
      .def_readonly("spread", &cw::DurationSweepRecord::spread)
      .def_readonly("pointer_dp", &cw::DurationSweepRecord::pointer_dp)
      .def_readonly("clock_spread", &cw::DurationSweepRecord::clock_spread)
      .def_readonly("duration_product", &cw::DurationSweepRecord::duration_product)
      .def_readonly("resolution_product", &cw::DurationSweepRecord::resolution_product)
      .def_readonly("max_abs_gz", &cw::DurationSweepRecord::max_abs_gz)
      .def_readonly("note", &cw::DurationSweepRecord::note);

  mod.def("pointer_readout", [](const cw::ScenarioParams& p) { return cw::pointer_readout(cw::make_scenario(p)); },
          py::arg("params"), "Pointer readout of one internal energy measurement.");
  mod.def("clock_delay", [](const cw::ScenarioParams& p, double z) {
        return cw::clock_delay(cw::make_scenario(p).profile, z);
      }, py::arg("params"), py::arg("z"));
  mod.def("stationary_residual", [](const cw::ScenarioParams& p, double z) {
        const auto s = cw::make_scenario(p);
        return cw::ode_residual(cw::stationary_solution(s, z), s, z);
      }, py::arg("params"), py::arg("z"), "ODE residual of the stationary clock solution at pointer value z.");
  mod.def("evaluate_duration_point", [](const cw::ScenarioParams& p) { return cw::evaluate_duration_point(p); },
          py::arg("params"));

  py::class_<cw::weighing::ShellExperiment>(mod, "ShellExperiment")
      .def(py::init([](double M, double R, double m, double v0, double G, double c, double hbar) {
             return cw::weighing::ShellExperiment{M, R, m, v0, G, c, hbar};
           }),
           py::arg("M"), py::arg("R"), py::arg("m"), py::arg("v0"), py::arg("G") = 1.0, py::arg("c") = 1.0,
           py::arg("hbar") = 1.0)
      .def_readwrite("M", &cw::weighing::ShellExperiment::M)
      .def_readwrite("R", &cw::weighing::ShellExperiment::R)
      .def_readwrite("m", &cw::weighing::ShellExperiment::m)
      .def_readwrite("v0", &cw::weighing::ShellExperiment::v0)
      .def_readwrite("G", &cw::weighing::ShellExperiment::G)
      .def_readwrite("c", &cw::weighing::ShellExperiment::c)
      .def_readwrite("hbar", &cw::weighing::ShellExperiment::hbar)
      .def("validate", &cw::weighing::ShellExperiment::validate);

  py::class_<cw::weighing::WeighingStatistics>(mod, "WeighingStatistics")
      .def_readonly("samples", &cw::weighing::WeighingStatistics::samples)
      .def_readonly("mean_mass", &cw::weighing::WeighingStatistics::mean_mass)
      .def_readonly("mass_spread", &cw::weighing::WeighingStatistics::mass_spread)
      .def_readonly("clock_spread", &cw::weighing::WeighingStatistics::clock_spread)
      .def_readonly("product", &cw::weighing::WeighingStatistics::product);

  mod.def("return_time", &cw::weighing::return_time, py::arg("exp"));
  mod.def("infer_mass", &cw::weighing::infer_mass, py::arg("tau_obs"), py::arg("exp"));
  mod.def("dilation_spread", &cw::weighing::dilation_spread, py::arg("exp"), py::arg("dz"), py::arg("tau"));
  mod.def("impulse_threshold", &cw::weighing::impulse_threshold, py::arg("exp"), py::arg("dM"), py::arg("tau"));
  mod.def("product_identity", &cw::weighing::product_identity, py::arg("exp"), py::arg("dz"), py::arg("dp"),
          py::arg("tau"));
  mod.def("monte_carlo_weighing", &cw::weighing::monte_carlo_weighing, py::arg("exp"), py::arg("dz"),
          py::arg("n_samples"), py::arg("seed"), py::arg("threads") = 1);

  py::class_<cw::disc::DiscExperiment>(mod, "DiscExperiment")
      .def(py::init([](double I, double omega, double m, double r, double T, double hbar) {
             return cw::disc::DiscExperiment{I, omega, m, r, T, hbar};
           }),
           py::arg("I"), py::arg("omega"), py::arg("m"), py::arg("r"), py::arg("T"), py::arg("hbar") = 1.0)
      .def_readwrite("I", &cw::disc::DiscExperiment::I)
      .def_readwrite("omega", &cw::disc::DiscExperiment::omega)
      .def_readwrite("m", &cw::disc::DiscExperiment::m)
      .def_readwrite("r", &cw::disc::DiscExperiment::r)
      .def_readwrite("T", &cw::disc::DiscExperiment::T)
      .def_readwrite("hbar", &cw::disc::DiscExperiment::hbar)
      .def("validate", &cw::disc::DiscExperiment::validate);

  py::class_<cw::disc::AngularReport>(mod, "AngularReport")
      .def_readonly("d_theta", &cw::disc::AngularReport::d_theta)
      .def_readonly("d_L", &cw::disc::AngularReport::d_L)
      .def_readonly("product", &cw::disc::AngularReport::product);

  py::class_<cw::disc::DiscStatistics>(mod, "DiscStatistics")
      .def_readonly("samples", &cw::disc::DiscStatistics::samples)
      .def_readonly("omega_spread", &cw::disc::DiscStatistics::omega_spread)
      .def_readonly("theta_spread", &cw::disc::DiscStatistics::theta_spread)
      .def_readonly("d_L", &cw::disc::DiscStatistics::d_L)
      .def_readonly("product", &cw::disc::DiscStatistics::product);

  mod.def("back_reaction_spread", [](const cw::disc::DiscExperiment& e, double dr) {
        const auto b = cw::disc::back_reaction_spread(e, dr);
        return py::make_tuple(b.d_omega, b.d_theta);
      }, py::arg("exp"), py::arg("dr"), "Returns (d_omega, d_theta).");
  mod.def("resolvable_accuracy", &cw::disc::resolvable_accuracy, py::arg("exp"), py::arg("dp"));
  mod.def("angular_product", &cw::disc::angular_product, py::arg("exp"), py::arg("dr"), py::arg("dp"));
  mod.def("monte_carlo_disc", &cw::disc::monte_carlo_disc, py::arg("exp"), py::arg("dr"), py::arg("n_samples"),
          py::arg("seed"), py::arg("threads") = 1);

  mod.def("run_config", [](const std::string& text, std::size_t threads) {
        const cw::RunConfig config = cw::parse_config(text);
        return cw::render(config, cw::run_sweep(config, threads));
      }, py::arg("config_text"), py::arg("threads") = 1,
      "Parses a JSON run configuration, runs it and returns the rendered output.");
  mod.def("normalize_config", [](const std::string& text) { return cw::serialize_config(cw::parse_config(text)); },
          py::arg("config_text"));
}
