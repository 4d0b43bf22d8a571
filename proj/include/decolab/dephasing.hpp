#pragma once

// Exact pure dephasing of a qubit coupled linearly to a bosonic bath:
// discrete-mode suppression factors, continuum decay functions, time
// regimes, and N-qubit generalizations.

#include <cstdint>
#include <string_view>
#include <vector>

#include "decolab/core.hpp"

namespace decolab::dephasing {

struct BathMode {
  cplx g;        // coupling, energy units
  double omega;  // mode frequency, > 0
};
using BathModes = std::vector<BathMode>;

/// J(w) = a w (w/w_c)^(d-1) exp(-w/w_c).
struct SpectralDensity {
  double a = 1.0;
  double omega_c = 1.0;
  int d = 1;

  SpectralDensity() = default;
  SpectralDensity(double a, double omega_c, int d);
  double operator()(double omega) const;
};

/// Displacement amplitude 2 g (1 - exp(i w t)) / w.
cplx alpha_k(cplx g, double omega, double t);

/// Vacuum suppression factor prod_k <0|D(alpha_k(t))|0>, global phase dropped.
cplx chi_vacuum_discrete(const BathModes& bath, double t);

/// Thermal suppression factor; each mode's exponent is weighted by
/// coth(w / 2T). T = 0 reproduces the vacuum factor.
cplx chi_thermal_discrete(const BathModes& bath, double temperature, double t);

/// Midpoint discretization of J on (0, omega_max] with |g_k|^2 = J(w_k) dw / 4,
/// so that sum_k 4|g_k|^2 (1 - cos w_k t)/w_k^2 approximates F_vac.
BathModes discretize(const SpectralDensity& j, std::size_t n_modes, double omega_max);

/// Upper integration limit w_c * max(50, 50 T / w_c).
double omega_max(const SpectralDensity& j, double temperature);

/// Vacuum decay function: integral of J(w)(1 - cos wt)/w^2 over w > 0.
double F_vac(const SpectralDensity& j, double t, double rel_tol = 1e-11);

/// Thermal decay function: the same integrand weighted by coth(w/2T) - 1.
double F_th(const SpectralDensity& j, double temperature, double t, double rel_tol = 1e-11);

/// (a/2) log(1 + w_c^2 t^2).
double F_vac_ohmic_closed(double a, double omega_c, double t);

/// a log(sinh(t/t_T) / (t/t_T)) with t_T = 1/(pi T).
double F_th_ohmic_closed(double a, double temperature, double t);

/// Thermal time 1/(pi T).
double thermal_time(double temperature);

double trigamma(double x);

/// Long-time limit of F_th for d = 3: 2a (T/w_c)^2 trigamma(1 + T/w_c).
double F_superohmic_limit(const SpectralDensity& j, double temperature);

enum class Regime { short_time, vacuum, thermal };
std::string_view regime_name(Regime regime);

struct RegimeEstimate {
  Regime regime;
  double F;  // asymptotic decay function in that regime
};

/// Ohmic baths only. Short time for t <= 1/w_c, vacuum up to 1/w_1 with the
/// Matsubara frequency w_1 = 2 pi T, thermal beyond. Throws DomainError when
/// 1/w_c >= 1/w_1.
RegimeEstimate classify_regime(const SpectralDensity& j, double temperature, double t);

enum class Coupling { same_reservoir, different_reservoirs };

/// Exponent weight multiplying F for the coherence <m|rho|n>: the squared
/// excitation difference for a common reservoir, the Hamming distance for
/// independent reservoirs.
std::uint64_t n_qubit_weight(unsigned n_qubits, std::uint64_t m, std::uint64_t n,
                             Coupling coupling);

/// exp(-weight * F).
double n_qubit_coherence(unsigned n_qubits, std::uint64_t m, std::uint64_t n,
                         Coupling coupling, double F);

/// Basis indices grouped by excitation number 0..N; each group is a
/// decoherence-free subspace under collective dephasing.
std::vector<std::vector<std::uint64_t>> dfs_states(unsigned n_qubits);

}  // namespace decolab::dephasing
