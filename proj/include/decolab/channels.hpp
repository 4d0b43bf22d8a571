#pragma once

// Quantum channels and measurements: Kraus maps, POVMs, efficient and
// indirect measurements, and the single-collision decoherence map.
//
// Composite operators always order the system first and the environment or
// probe second, so a product operator is kron(system_op, env_op).

#include <cstddef>
#include <utility>
#include <vector>

#include "decolab/core.hpp"

namespace decolab {

/// Completely positive trace-preserving map rho -> sum_k W_k rho W_k^dagger.
/// Construction checks sum_k W_k^dagger W_k = I to tol::trace.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Operator> ops);

  const std::vector<Operator>& ops() const noexcept { return ops_; }
  Index dim() const noexcept { return dim_; }

  /// Choi matrix sum_ij |i><j| (x) Phi(|i><j|).
  Operator choi() const;

 private:
  std::vector<Operator> ops_;
  Index dim_ = 0;
};

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho);

/// Smallest Choi eigenvalue is at least -tol::positivity.
bool is_completely_positive(const KrausChannel& channel);

/// Kraus operators W = sqrt(p_l) <j|S_tot|psi_l> of the reduced dynamics of a
/// system coupled to an environment in state rho_env. Environment eigenvalues
/// below 1e-12 and Kraus operators with norm below 1e-12 are dropped.
KrausChannel kraus_from_scattering(const Operator& s_tot, const DensityOperator& rho_env);

/// Single collision with a unitary that commutes with the system basis:
/// rho'_mn = rho_mn <psi_in|S_n^dagger S_m|psi_in>. `basis` must be an
/// orthonormal basis of the system; the result is returned in the original
/// (computational) representation.
DensityOperator scatter_commuting(const DensityOperator& rho,
                                  const std::vector<StateVector>& basis,
                                  const std::vector<Operator>& s_env,
                                  const StateVector& psi_in);

/// Positive effects summing to the identity.
class Povm {
 public:
  explicit Povm(std::vector<Operator> effects);
  const std::vector<Operator>& effects() const noexcept { return effects_; }
  std::size_t size() const noexcept { return effects_.size(); }

 private:
  std::vector<Operator> effects_;
};

/// Generalized measurement with measurement operators M_{alpha,k}; efficient
/// when every outcome has exactly one operator.
class Measurement {
 public:
  explicit Measurement(std::vector<std::vector<Operator>> ops);
  static Measurement efficient(std::vector<Operator> ops);

  std::size_t outcomes() const noexcept { return ops_.size(); }
  const std::vector<Operator>& ops(std::size_t outcome) const { return ops_.at(outcome); }
  bool is_efficient() const;
  Povm povm() const;
  /// Non-selective measurement: all M_{alpha,k} as one Kraus channel.
  KrausChannel average_channel() const;

 private:
  std::vector<std::vector<Operator>> ops_;
};

double born_probability(const Operator& effect, const DensityOperator& rho);

/// Conditional state after outcome `outcome`. Throws DomainError if the
/// outcome has zero probability.
DensityOperator measure_update(const Measurement& measurement, const DensityOperator& rho,
                               std::size_t outcome);

struct PolarParts {
  Operator unitary;
  Operator sqrt_effect;
};

/// Left polar decomposition M = U sqrt(M^dagger M). Throws DomainError for
/// rank-deficient M, where U is not unique.
PolarParts polar_split(const Operator& m);

struct IndirectMeasurement {
  Povm povm;
  Measurement measurement;
};

/// Measurement induced on the system by coupling to a probe through S_tot and
/// reading the probe with orthogonal projectors. For projectors of rank
/// greater than one, every basis vector of the projector's range contributes
/// its own measurement operator.
IndirectMeasurement indirect_measurement(const Operator& s_tot, const DensityOperator& rho_probe,
                                         const std::vector<Operator>& probe_projectors);

}  // namespace decolab
