#pragma once

// Quantum-jump unravelling of Lindblad dynamics: jump records, the
// non-hermitian no-jump evolution, waiting-time sampling, record
// probabilities and ensemble averages.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "decolab/core.hpp"
#include "decolab/lindblad.hpp"

namespace decolab {

struct JumpEvent {
  double time;
  std::size_t channel;
};

/// Ordered jump events on the interval (start, horizon).
struct JumpRecord {
  std::vector<JumpEvent> events;
  double horizon = 0.0;
  double start = 0.0;

  /// Throws DomainError unless start < t_1 < ... < t_n < horizon.
  void validate() const;
};

/// H_C = H - (i/2) sum_k gamma_k L_k^dag L_k.
Operator effective_hamiltonian(const LindbladGenerator& gen);

/// exp(-i H_C tau) applied to vectors, with the exponential prepared once.
/// Uses an eigendecomposition of H_C when its eigenbasis is well conditioned
/// and a dense matrix exponential per call otherwise.
class NoJumpPropagator {
 public:
  explicit NoJumpPropagator(const LindbladGenerator& gen);

  StateVector apply(const StateVector& psi, double tau) const;
  Operator propagator(double tau) const;
  const Operator& effective_hamiltonian() const noexcept { return hc_; }

 private:
  Operator hc_;
  bool diagonal_ = false;
  Eigen::MatrixXcd vectors_;
  Eigen::MatrixXcd inverse_;
  Eigen::VectorXcd eigenvalues_;
};

/// Unnormalized exp(-i H_C tau) psi; its squared norm is the probability of no
/// jump during tau.
StateVector no_jump_propagate(const StateVector& psi, const LindbladGenerator& gen, double tau);

/// First tau with |exp(-i H_C tau) psi|^2 = u, bracketed on a grid of
/// t_max/256 and refined by bisection to 1e-10 relative accuracy. Empty when
/// no jump happens before t_max.
std::optional<double> sample_jump_time(const StateVector& psi, const NoJumpPropagator& no_jump,
                                       double u, double t_max);
std::optional<double> sample_jump_time(const StateVector& psi, const LindbladGenerator& gen,
                                       double u, double t_max);

struct JumpOutcome {
  std::size_t channel;
  StateVector psi;
};

/// Channel k picked with probability gamma_k |L_k psi|^2 / sum, using the
/// uniform draw u in (0, 1). Throws DomainError if no jump is possible.
JumpOutcome apply_jump(const StateVector& psi, const LindbladGenerator& gen, double u);

/// Per-trajectory random stream derived from (base_seed, index).
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t base_seed, std::uint64_t index);
  /// Uniform draw strictly inside (0, 1).
  double uniform();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct TrajectoryResult {
  JumpRecord record;
  StateVector psi_final;
  /// Normalized states at the requested checkpoint times.
  std::vector<StateVector> checkpoints;
};

/// One trajectory on [0, horizon]. Checkpoint times must be sorted and lie in
/// [0, horizon].
TrajectoryResult run_trajectory(const StateVector& psi0, const LindbladGenerator& gen,
                                double horizon, std::uint64_t seed,
                                const std::vector<double>& checkpoints = {});
TrajectoryResult run_trajectory(const StateVector& psi0, const LindbladGenerator& gen,
                                const NoJumpPropagator& no_jump, double horizon,
                                TrajectoryRng& rng, const std::vector<double>& checkpoints = {});

/// Compound measurement operator of the record applied to psi0, normalized.
StateVector apply_record(const StateVector& psi0, const LindbladGenerator& gen,
                         const JumpRecord& record);

/// tr(K_R rho): probability density of the record (probability for n = 0).
double record_probability_density(const JumpRecord& record, const DensityOperator& rho0,
                                  const LindbladGenerator& gen);

/// Normalized state conditioned on the record, T(rho|R).
DensityOperator condition_on_record(const JumpRecord& record, const DensityOperator& rho0,
                                    const LindbladGenerator& gen);

/// Mean of |psi><psi| over n_traj trajectories at each requested time. The
/// reduction order is fixed, so results do not depend on `threads`
/// (0 selects the hardware concurrency).
std::vector<DensityOperator> ensemble_average(const StateVector& psi0,
                                              const LindbladGenerator& gen,
                                              const std::vector<double>& times,
                                              std::size_t n_traj, std::uint64_t base_seed,
                                              unsigned threads = 0);

DensityOperator ensemble_average(const StateVector& psi0, const LindbladGenerator& gen,
                                 double horizon, std::size_t n_traj, std::uint64_t base_seed,
                                 unsigned threads = 0);

}  // namespace decolab
