#pragma once

// Markovian generators: Lindblad and first standard forms, Liouvillians and
// their duals, gauge transformations, propagation, and the closed-form
// oracles of the dephasing, damped-oscillator, cat-state and quantum
// Brownian motion models.

#include <vector>

#include "decolab/core.hpp"

namespace decolab {

struct LindbladChannel {
  double rate;  // gamma_k >= 0
  Operator op;  // L_k
};

/// Hermitian H plus (rate, jump operator) pairs.
class LindbladGenerator {
 public:
  LindbladGenerator(Operator hamiltonian, std::vector<LindbladChannel> channels);

  const Operator& hamiltonian() const noexcept { return h_; }
  const std::vector<LindbladChannel>& channels() const noexcept { return channels_; }
  Index dim() const noexcept { return h_.rows(); }

 private:
  Operator h_;
  std::vector<LindbladChannel> channels_;
};

/// H, an orthonormal set of traceless operators E_i and a PSD coefficient
/// matrix alpha: L rho = -i[H, rho] + sum_ij alpha_ij (E_i rho E_j^dag - 1/2 {E_j^dag E_i, rho}).
struct FirstStandardForm {
  Operator hamiltonian;
  std::vector<Operator> basis;
  Eigen::MatrixXcd alpha;
};

/// Orthonormal traceless Hilbert-Schmidt basis (normalized generalized
/// Gell-Mann matrices), d^2 - 1 elements.
std::vector<Operator> traceless_basis(Index dim);

LindbladGenerator to_lindblad_form(const FirstStandardForm& form);
FirstStandardForm to_first_form(const LindbladGenerator& gen);
SuperOperator first_form_liouvillian(const FirstStandardForm& form);

SuperOperator liouvillian(const LindbladGenerator& gen);
SuperOperator dual_liouvillian(const LindbladGenerator& gen);

/// Direct matrix actions of the generator and its dual.
Operator apply_generator(const LindbladGenerator& gen, const Operator& rho);
Operator apply_dual(const LindbladGenerator& gen, const Operator& a);

/// L_k -> L_k + c_k, H -> H + (1/2i) sum_k gamma_k (c_k^* L_k - c_k L_k^dag).
LindbladGenerator gauge_shift(const LindbladGenerator& gen, const std::vector<cplx>& shifts);

/// Shift every jump operator to be traceless.
LindbladGenerator make_traceless(const LindbladGenerator& gen);

/// sqrt(gamma_i) L_i -> sum_j U_ij sqrt(gamma_j) L_j; output rates are 1.
LindbladGenerator mix_channels(const LindbladGenerator& gen, const Operator& unitary);

struct PropagateOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Dimension above which an adaptive Runge-Kutta on rho replaces the
  /// superoperator exponential.
  Index exponential_max_dim = 12;
  /// Check that the top two Fock levels stay below 1e-6 population.
  bool monitor_fock_leakage = false;
};

DensityOperator propagate(const LindbladGenerator& gen, const DensityOperator& rho, double t,
                          const PropagateOptions& options = {});

/// Heisenberg picture exp(L# t) A.
Operator heisenberg(const LindbladGenerator& gen, const Operator& a, double t,
                    const PropagateOptions& options = {});

/// Population in the top `levels` Fock states.
double top_fock_population(const Operator& rho, Index levels = 2);

// Pure dephasing in the energy eigenbasis.

/// Single channel with rate gamma and operator H.
LindbladGenerator dephasing_generator(const Operator& hamiltonian, double gamma);

/// rho_mn(t) = rho_mn(0) exp(-i(E_m - E_n)t - (gamma/2)(E_m - E_n)^2 t), rho in the
/// energy eigenbasis.
DensityOperator dephasing_solution(const std::vector<double>& energies, double gamma,
                                   const DensityOperator& rho0, double t);

// Truncated Fock space.

Operator annihilation(Index n_max);
Operator number_operator(Index n_max);
/// x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2).
Operator position_fock(Index n_max);
Operator momentum_fock(Index n_max);

struct CoherentStateSpec {
  cplx alpha;
  Index n_max;  // Fock dimension
};

/// Throws DomainError unless |alpha|^2 <= n_max / 4.
void check_truncation(const CoherentStateSpec& spec);
/// Truncated coherent vector, renormalized.
StateVector coherent_vector(const CoherentStateSpec& spec);
DensityOperator coherent_state(const CoherentStateSpec& spec);

/// H = omega a^dag a, single channel L = a with rate gamma.
LindbladGenerator damped_oscillator_generator(double omega, double gamma, Index n_max);

/// alpha_0 exp(-i omega t - gamma t / 2).
cplx damped_coherent_amplitude(cplx alpha0, double omega, double gamma, double t);

/// alpha = sqrt(m omega / 2)(x + i p / (m omega)).
cplx coherent_amplitude(double mass, double omega, double x, double p);

// Cat states |alpha> + |beta>.

/// c_t = c_0 exp([-1/2 |a0 - b0|^2 + i Im(a0 b0^*)](1 - exp(-gamma t))).
cplx cat_coherence_factor(cplx alpha0, cplx beta0, double gamma, double t, cplx c0 = 1.0);

/// gamma_deco / gamma = |a0 - b0|^2 / 2.
double cat_decoherence_ratio(cplx alpha0, cplx beta0);

/// The same ratio for a pendulum cat displaced to +-x, from SI mass (kg),
/// angular frequency (rad/s) and displacement (m).
double cat_decoherence_ratio_si(double mass_kg, double omega, double displacement_m);

/// Initial decay rate -d/dt log|c| at t = 0, from a least-squares quadratic
/// fit of log|c(t)|. Needs at least three samples.
double fit_initial_decay_rate(const std::vector<double>& times, const std::vector<cplx>& values);

/// Normalized (|alpha> + |beta>) on a truncated Fock space.
DensityOperator cat_state(cplx alpha, cplx beta, Index n_max);

/// Reads the interference coefficient c of rho = N(|a><a| + |b><b| + c|a><b| + c^*|b><a|)
/// off a density matrix, given the (truncated, normalized) branch vectors.
cplx extract_cat_coherence(const Operator& rho, const StateVector& a, const StateVector& b);

// Quantum Brownian motion (V = 0).

/// p_th = 2 sqrt(m T).
double thermal_momentum(double mass, double temperature);

/// H = p^2/2m + (gamma/2)(xp + px), L = p_th x + i p / p_th with rate gamma,
/// on a truncated Fock basis.
LindbladGenerator qbm_generator(double mass, double gamma, double temperature, Index n_max);

struct QbmMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double cov_xp = 0.0;  // <{dx, dp}> / 2

  double kinetic_energy(double mass) const { return (var_p + mean_p * mean_p) / (2.0 * mass); }
};

/// Closed-form moments at time t. Throws DomainError for a non-zero potential.
QbmMoments qbm_moments(double mass, double gamma, double temperature, const QbmMoments& initial,
                       double t, double potential_curvature = 0.0);

/// Long-time slope of var_x: T/(m gamma) + gamma/(4 m T).
double qbm_position_spread_rate(double mass, double gamma, double temperature);

/// [x_t, p_t] of the dual-evolved canonical pair: i exp(-2 gamma t).
cplx qbm_evolved_commutator(double gamma, double t);

/// Lambda_th^2 = 2 pi / (m T).
double thermal_de_broglie_sq(double mass, double temperature);

/// gamma_deco / gamma = 4 pi (x - x')^2 / Lambda_th^2.
double qbm_coherence_ratio(double x, double x_prime, double temperature, double mass);

/// exp(-gamma_deco t).
double qbm_coherence_decay(double x, double x_prime, double temperature, double mass,
                           double gamma, double t);

}  // namespace decolab
