// Python bindings for the decolab core. Matrices cross as complex numpy
// arrays; density matrices are validated on the way in.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "decolab/collisional.hpp"
#include "decolab/core.hpp"
#include "decolab/dephasing.hpp"
#include "decolab/lindblad.hpp"
#include "decolab/pointer_states.hpp"
#include "decolab/trajectories.hpp"
#include "decolab/units.hpp"

namespace py = pybind11;
using namespace decolab;

namespace {

LindbladGenerator make_generator(const Operator& h, const std::vector<std::pair<double, Operator>>& channels) {
  std::vector<LindbladChannel> out;
  out.reserve(channels.size());
  for (const auto& [rate, op] : channels) out.push_back({rate, op});
  return LindbladGenerator(h, std::move(out));
}

}  // namespace

PYBIND11_MODULE(_decolab, m) {
  m.doc() = "decoherence toolkit core (natural units, hbar = k_B = 1)";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());

  auto u = m.def_submodule("units", "SI <-> natural unit conversions");
  u.attr("hbar") = units::hbar;
  u.attr("k_boltzmann") = units::k_boltzmann;
  u.def("mass_to_natural", &units::mass_to_natural);
  u.def("mass_to_si", &units::mass_to_si);
  u.def("temperature_to_natural", &units::temperature_to_natural);
  u.def("temperature_to_si", &units::temperature_to_si);
  u.def("energy_to_natural", &units::energy_to_natural);
  u.def("energy_to_si", &units::energy_to_si);

  // Pure dephasing.
  py::class_<dephasing::SpectralDensity>(m, "SpectralDensity")
      .def(py::init<double, double, int>(), py::arg("a"), py::arg("omega_c"), py::arg("d") = 1)
      .def_readonly("a", &dephasing::SpectralDensity::a)
      .def_readonly("omega_c", &dephasing::SpectralDensity::omega_c)
      .def_readonly("d", &dephasing::SpectralDensity::d)
      .def("__call__", &dephasing::SpectralDensity::operator());
  m.def("F_vac", &dephasing::F_vac, py::arg("j"), py::arg("t"), py::arg("rel_tol") = 1e-11);
  m.def("F_th", &dephasing::F_th, py::arg("j"), py::arg("temperature"), py::arg("t"), py::arg("rel_tol") = 1e-11);
  m.def("F_superohmic_limit", &dephasing::F_superohmic_limit, py::arg("j"), py::arg("temperature"));
  m.def("regime", [](const dephasing::SpectralDensity& j, double temperature, double t) {
    return std::string(dephasing::regime_name(dephasing::classify_regime(j, temperature, t).regime));
  });
  m.def(
      "n_qubit_weight",
      [](unsigned n, std::uint64_t a, std::uint64_t b, bool same) {
        return dephasing::n_qubit_weight(n, a, b,
                                         same ? dephasing::Coupling::same_reservoir
                                              : dephasing::Coupling::different_reservoirs);
      },
      py::arg("n_qubits"), py::arg("m"), py::arg("n"), py::arg("same_reservoir") = true);

  // Master equations.
  py::class_<LindbladGenerator>(m, "LindbladGenerator")
      .def(py::init(&make_generator), py::arg("hamiltonian"), py::arg("channels") = std::vector<std::pair<double, Operator>>{})
      .def_property_readonly("dim", &LindbladGenerator::dim)
      .def_property_readonly("hamiltonian", &LindbladGenerator::hamiltonian)
      .def("apply", [](const LindbladGenerator& g, const Operator& rho) { return apply_generator(g, rho); })
      .def("liouvillian", [](const LindbladGenerator& g) { return liouvillian(g).matrix(); });
  m.def(
      "propagate",
      [](const LindbladGenerator& g, const Operator& rho, double t) {
        return propagate(g, DensityOperator(rho), t).matrix();
      },
      py::arg("generator"), py::arg("rho"), py::arg("t"));
  m.def("damped_oscillator_generator", &damped_oscillator_generator, py::arg("omega"), py::arg("gamma"),
        py::arg("n_max"));
  m.def("qbm_generator", &qbm_generator, py::arg("mass"), py::arg("gamma"), py::arg("temperature"), py::arg("n_max"));
  m.def(
      "coherent_vector", [](cplx alpha, Index n) { return coherent_vector({alpha, n}); }, py::arg("alpha"),
      py::arg("n_max"));
  m.def("annihilation", &annihilation, py::arg("n_max"));
  m.def("cat_coherence_factor", &cat_coherence_factor, py::arg("alpha0"), py::arg("beta0"), py::arg("gamma"),
        py::arg("t"), py::arg("c0") = cplx(1.0));
  m.def("cat_decoherence_ratio", &cat_decoherence_ratio, py::arg("alpha0"), py::arg("beta0"));
  m.def("cat_decoherence_ratio_si", &cat_decoherence_ratio_si, py::arg("mass_kg"), py::arg("omega"),
        py::arg("displacement_m"));
  m.def("trace_distance", [](const Operator& a, const Operator& b) { return trace_distance(a, b); });

  // Trajectories.
  m.def(
      "ensemble_average",
      [](const StateVector& psi0, const LindbladGenerator& g, const std::vector<double>& times, std::size_t n_traj,
         std::uint64_t seed, unsigned threads) {
        std::vector<DensityOperator> avg;
        {
          py::gil_scoped_release release;
          avg = ensemble_average(psi0, g, times, n_traj, seed, threads);
        }
        std::vector<Operator> out;
        for (const auto& r : avg) out.push_back(r.matrix());
        return out;
      },
      py::arg("psi0"), py::arg("generator"), py::arg("times"), py::arg("n_traj"), py::arg("seed"),
      py::arg("threads") = 0);

  // Collisional decoherence.
  py::class_<collisional::GasModel>(m, "GasModel")
      .def(py::init<double, double, double>(), py::arg("n_gas"), py::arg("mass"), py::arg("temperature"))
      .def_readonly("n_gas", &collisional::GasModel::n_gas)
      .def_readonly("mass", &collisional::GasModel::mass)
      .def_readonly("temperature", &collisional::GasModel::temperature)
      .def("mean_speed", &collisional::GasModel::mean_speed);
  py::class_<collisional::Amplitude>(m, "Amplitude")
      .def("__call__", [](const collisional::Amplitude& f, double c, double e) { return f(c, e); });
  m.def("constant_amplitude", &collisional::constant_amplitude, py::arg("f0"));
  m.def("hard_sphere_amplitude", &collisional::hard_sphere_amplitude, py::arg("radius"), py::arg("mass"));
  m.def("total_collision_rate", &collisional::total_collision_rate, py::arg("f"), py::arg("gas"));
  m.def("localization_rate", &collisional::localization_rate, py::arg("f"), py::arg("gas"), py::arg("x"));

  // Pointer states.
  m.def(
      "linear_entropy_rate",
      [](const Operator& rho, const LindbladGenerator& g) { return pointer::linear_entropy_rate(DensityOperator(rho), g); },
      py::arg("rho"), py::arg("generator"));
  m.def(
      "evolve_robust",
      [](const StateVector& xi0, const LindbladGenerator& g, const std::vector<double>& times) {
        return pointer::evolve_robust(xi0, g, times);
      },
      py::arg("xi0"), py::arg("generator"), py::arg("times"));
  m.def("qbm_soliton_width", &pointer::qbm_soliton_width, py::arg("mass"), py::arg("gamma"), py::arg("temperature"));
  m.def("qbm_soliton_width_si", &pointer::qbm_soliton_width_si, py::arg("mass_kg"), py::arg("gamma_per_s"),
        py::arg("temperature_k"));
}
