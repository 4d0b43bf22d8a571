#pragma once

// Robust (pointer) states: the linear-entropy sieve and the nonlinear,
// purity-preserving flow d/dt P = [P, [P, L(P)]] on state vectors.

#include <vector>

#include "decolab/core.hpp"
#include "decolab/lindblad.hpp"

namespace decolab::pointer {

/// -2 tr(rho L(rho)).
double linear_entropy_rate(const DensityOperator& rho, const LindbladGenerator& gen);

/// -i H xi + sum_k gamma_k [<L_k^dag>(L_k - <L_k>) - 1/2 (L_k^dag L_k - <L_k^dag L_k>)] xi,
/// without the global phase term.
StateVector nonlinear_rhs(const StateVector& xi, const LindbladGenerator& gen);

/// [P, [P, L(P)]] for P = |xi><xi|.
Operator projector_rhs(const StateVector& xi, const LindbladGenerator& gen);

struct FlowOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0 means unbounded
};

struct FlowStats {
  long accepted_steps = 0;
  /// Sum over accepted steps of | ||xi|| - 1 | before renormalization.
  double accumulated_drift = 0.0;
  double max_step_drift = 0.0;
};

/// Normalized states of the flow at each requested (sorted, non-negative)
/// time. The state is renormalized after every accepted step.
std::vector<StateVector> evolve_robust(const StateVector& xi0, const LindbladGenerator& gen,
                                       const std::vector<double>& times,
                                       const FlowOptions& options = {},
                                       FlowStats* stats = nullptr);

/// Uniform periodic grid of n points centred on zero with spacing span / n.
struct PositionGrid {
  std::vector<double> x;
  double dx = 0.0;

  PositionGrid(Index n, double span);
  Index size() const noexcept { return static_cast<Index>(x.size()); }
};

/// Dense spectral momentum operator on the grid (Nyquist mode dropped).
Operator spectral_momentum(const PositionGrid& grid);

/// sigma_0 = (1 / (8 gamma m^2 T))^(1/4): standard deviation of |xi(x)|^2 for
/// the stationary Gaussian of the flow.
double qbm_soliton_width(double mass, double gamma, double temperature);

/// Same formula with SI inputs (kg, 1/s, K); returns metres.
double qbm_soliton_width_si(double mass_kg, double gamma_per_s, double temperature_k);

/// H = p^2/2m (spectral) and one channel L = sqrt(8 pi / Lambda_th^2) x with
/// rate gamma. Throws DomainError when the grid has fewer than 256 points,
/// spans less than 10 sigma_0, or resolves sigma_0 with fewer than 4 points.
LindbladGenerator qbm_pointer_generator(double mass, double gamma, double temperature,
                                        const PositionGrid& grid);

/// Gaussian wave packet sampled on the grid, normalized.
StateVector gaussian_packet(const PositionGrid& grid, double center, double sigma,
                            double momentum = 0.0);

/// Second central moment of |xi(x)|^2.
double position_variance(const StateVector& xi, const PositionGrid& grid);

}  // namespace decolab::pointer
