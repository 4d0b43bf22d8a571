#include "decolab/channels.hpp"

#include <cmath>
#include <sstream>

namespace decolab {
namespace {

constexpr double kDropThreshold = 1e-12;

void check_square(const Operator& op, const char* what) {
  if (op.rows() == 0 || op.rows() != op.cols()) {
    throw DimensionError(std::string(what) + " must be a non-empty square matrix");
  }
  if (!op.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
}

// (I (x) <bra|) S (I (x) |ket>) for S on system (x) environment.
Operator env_matrix_element(const Operator& s, Index ds, Index de, const StateVector& bra,
                            const StateVector& ket) {
  Operator out = Operator::Zero(ds, ds);
  for (Index j = 0; j < de; ++j) {
    const cplx cb = std::conj(bra(j));
    if (cb == 0.0) continue;
    for (Index l = 0; l < de; ++l) {
      const cplx w = cb * ket(l);
      if (w == 0.0) continue;
      for (Index a = 0; a < ds; ++a) {
        for (Index b = 0; b < ds; ++b) out(a, b) += w * s(a * de + j, b * de + l);
      }
    }
  }
  return out;
}

Index system_dim_of(const Operator& s_tot, Index env_dim) {
  if (s_tot.rows() % env_dim != 0) {
    throw DimensionError("composite operator dimension is not a multiple of the environment dimension");
  }
  return s_tot.rows() / env_dim;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Operator> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw DimensionError("Kraus channel needs at least one operator");
  dim_ = ops_.front().cols();
  Operator sum = Operator::Zero(dim_, dim_);
  for (const auto& w : ops_) {
    if (w.rows() != dim_ || w.cols() != dim_) {
      throw DimensionError("Kraus operators must share one square dimension");
    }
    if (!w.allFinite()) throw DomainError("Kraus operator has non-finite entries");
    sum += w.adjoint() * w;
  }
  const double defect = (sum - identity(dim_)).cwiseAbs().maxCoeff();
  if (defect > tol::trace) {
    std::ostringstream msg;
    msg << "Kraus completeness violated by " << defect;
    throw DomainError(msg.str());
  }
}

Operator KrausChannel::choi() const {
  const Index d = dim_;
  Operator out = Operator::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Operator unit = Operator::Zero(d, d);
      unit(i, j) = 1.0;
      Operator image = Operator::Zero(d, d);
      for (const auto& w : ops_) image += w * unit * w.adjoint();
      out.block(i * d, j * d, d, d) = image;
    }
  }
  return out;
}

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho) {
  if (rho.dim() != channel.dim()) throw DimensionError("channel and state dimensions differ");
  Operator out = Operator::Zero(rho.dim(), rho.dim());
  for (const auto& w : channel.ops()) out += w * rho.matrix() * w.adjoint();
  return DensityOperator(0.5 * (out + out.adjoint()));
}

bool is_completely_positive(const KrausChannel& channel) {
  return min_eigenvalue(channel.choi()) >= -tol::positivity;
}

KrausChannel kraus_from_scattering(const Operator& s_tot, const DensityOperator& rho_env) {
  check_square(s_tot, "scattering operator");
  if (!is_unitary(s_tot)) throw DomainError("scattering operator is not unitary");
  const Index de = rho_env.dim();
  const Index ds = system_dim_of(s_tot, de);

  Eigen::SelfAdjointEigenSolver<Operator> solver(rho_env.matrix());
  std::vector<Operator> ops;
  for (Index l = 0; l < de; ++l) {
    const double p = solver.eigenvalues()(l);
    if (p < kDropThreshold) continue;
    const StateVector psi_l = solver.eigenvectors().col(l);
    for (Index j = 0; j < de; ++j) {
      const StateVector bra = StateVector::Unit(de, j);
      Operator w = std::sqrt(p) * env_matrix_element(s_tot, ds, de, bra, psi_l);
      if (w.norm() < kDropThreshold) continue;
      ops.push_back(std::move(w));
    }
  }
  // Clipping small eigenvalues leaves sum p_l slightly below one; rescale so
  // the channel is exactly trace preserving.
  Operator sum = Operator::Zero(ds, ds);
  for (const auto& w : ops) sum += w.adjoint() * w;
  const double scale = sum.trace().real() / static_cast<double>(ds);
  if (scale > 0.0) {
    for (auto& w : ops) w /= std::sqrt(scale);
  }
  return KrausChannel(std::move(ops));
}

DensityOperator scatter_commuting(const DensityOperator& rho,
                                  const std::vector<StateVector>& basis,
                                  const std::vector<Operator>& s_env,
                                  const StateVector& psi_in) {
  const Index d = rho.dim();
  if (static_cast<Index>(basis.size()) != d || s_env.size() != basis.size()) {
    throw DimensionError("need one basis vector and one environment operator per system level");
  }
  Operator change(d, d);
  for (Index n = 0; n < d; ++n) {
    if (basis[static_cast<std::size_t>(n)].size() != d) {
      throw DimensionError("basis vector has the wrong dimension");
    }
    change.col(n) = basis[static_cast<std::size_t>(n)];
  }
  if (!is_unitary(change, 1e-10)) throw DomainError("system basis is not orthonormal");
  const Index de = psi_in.size();
  for (const auto& s : s_env) {
    if (s.rows() != de || s.cols() != de) {
      throw DimensionError("environment operator does not match the environment state");
    }
    if (!is_unitary(s)) throw DomainError("environment scattering operator is not unitary");
  }
  const double norm = psi_in.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw DomainError("environment state is not normalized");

  std::vector<StateVector> scattered;
  scattered.reserve(s_env.size());
  for (const auto& s : s_env) scattered.push_back(s * psi_in);

  Operator in_basis = change.adjoint() * rho.matrix() * change;
  for (Index m = 0; m < d; ++m) {
    for (Index n = 0; n < d; ++n) {
      if (m == n) continue;
      // <psi|S_n^dagger S_m|psi>
      const cplx overlap = scattered[static_cast<std::size_t>(n)].dot(
          scattered[static_cast<std::size_t>(m)]);
      in_basis(m, n) *= overlap;
    }
  }
  const Operator out = change * in_basis * change.adjoint();
  return DensityOperator(0.5 * (out + out.adjoint()));
}

Povm::Povm(std::vector<Operator> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DimensionError("POVM needs at least one effect");
  const Index d = effects_.front().rows();
  Operator sum = Operator::Zero(d, d);
  for (const auto& f : effects_) {
    check_square(f, "POVM effect");
    if (f.rows() != d) throw DimensionError("POVM effects differ in dimension");
    if (!is_hermitian(f)) throw DomainError("POVM effect is not hermitian");
    if (min_eigenvalue(f) < -tol::positivity) throw DomainError("POVM effect is not positive");
    sum += f;
  }
  if ((sum - identity(d)).cwiseAbs().maxCoeff() > tol::trace) {
    throw DomainError("POVM effects do not sum to the identity");
  }
}

Measurement::Measurement(std::vector<std::vector<Operator>> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw DimensionError("measurement needs at least one outcome");
  Index d = -1;
  Operator sum;
  for (const auto& outcome : ops_) {
    if (outcome.empty()) throw DimensionError("measurement outcome without operators");
    for (const auto& m : outcome) {
      check_square(m, "measurement operator");
      if (d < 0) {
        d = m.rows();
        sum = Operator::Zero(d, d);
      }
      if (m.rows() != d) throw DimensionError("measurement operators differ in dimension");
      sum += m.adjoint() * m;
    }
  }
  const double defect = (sum - identity(d)).cwiseAbs().maxCoeff();
  if (defect > tol::trace) {
    std::ostringstream msg;
    msg << "measurement operators violate completeness by " << defect;
    throw DomainError(msg.str());
  }
}

Measurement Measurement::efficient(std::vector<Operator> ops) {
  std::vector<std::vector<Operator>> nested;
  nested.reserve(ops.size());
  for (auto& m : ops) nested.push_back({std::move(m)});
  return Measurement(std::move(nested));
}

bool Measurement::is_efficient() const {
  for (const auto& outcome : ops_) {
    if (outcome.size() != 1) return false;
  }
  return true;
}

Povm Measurement::povm() const {
  std::vector<Operator> effects;
  effects.reserve(ops_.size());
  for (const auto& outcome : ops_) {
    Operator f = Operator::Zero(outcome.front().rows(), outcome.front().rows());
    for (const auto& m : outcome) f += m.adjoint() * m;
    effects.push_back(0.5 * (f + f.adjoint()));
  }
  return Povm(std::move(effects));
}

KrausChannel Measurement::average_channel() const {
  std::vector<Operator> all;
  for (const auto& outcome : ops_) all.insert(all.end(), outcome.begin(), outcome.end());
  return KrausChannel(std::move(all));
}

double born_probability(const Operator& effect, const DensityOperator& rho) {
  if (effect.rows() != rho.dim() || effect.cols() != rho.dim()) {
    throw DimensionError("effect and state dimensions differ");
  }
  return (effect * rho.matrix()).trace().real();
}

DensityOperator measure_update(const Measurement& measurement, const DensityOperator& rho,
                               std::size_t outcome) {
  if (outcome >= measurement.outcomes()) throw DimensionError("measurement outcome out of range");
  Operator out = Operator::Zero(rho.dim(), rho.dim());
  for (const auto& m : measurement.ops(outcome)) {
    if (m.rows() != rho.dim()) throw DimensionError("measurement and state dimensions differ");
    out += m * rho.matrix() * m.adjoint();
  }
  const double p = out.trace().real();
  if (!(p > kDropThreshold)) {
    throw DomainError("outcome has zero probability; conditional state undefined");
  }
  out /= p;
  return DensityOperator(0.5 * (out + out.adjoint()));
}

PolarParts polar_split(const Operator& m) {
  check_square(m, "measurement operator");
  Eigen::JacobiSVD<Operator> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma(sigma.size() - 1) <= 1e-12 * std::max(1.0, sigma(0))) {
    throw DomainError("operator is rank deficient; polar unitary is not unique");
  }
  const Operator& u = svd.matrixU();
  const Operator& v = svd.matrixV();
  return {u * v.adjoint(), v * sigma.cast<cplx>().asDiagonal() * v.adjoint()};
}

IndirectMeasurement indirect_measurement(const Operator& s_tot, const DensityOperator& rho_probe,
                                         const std::vector<Operator>& probe_projectors) {
  check_square(s_tot, "coupling unitary");
  if (!is_unitary(s_tot)) throw DomainError("coupling unitary is not unitary");
  const Index dp = rho_probe.dim();
  const Index ds = system_dim_of(s_tot, dp);
  if (probe_projectors.empty()) throw DimensionError("need at least one probe projector");

  Operator total = Operator::Zero(dp, dp);
  for (const auto& p : probe_projectors) {
    if (p.rows() != dp || p.cols() != dp) throw DimensionError("probe projector dimension");
    if (!is_hermitian(p) || (p * p - p).cwiseAbs().maxCoeff() > 1e-10) {
      throw DomainError("probe projector is not an orthogonal projector");
    }
    total += p;
  }
  if ((total - identity(dp)).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("probe projectors are incomplete");
  }

  Eigen::SelfAdjointEigenSolver<Operator> probe(rho_probe.matrix());
  std::vector<std::pair<double, StateVector>> weights;
  for (Index k = 0; k < dp; ++k) {
    const double w = probe.eigenvalues()(k);
    if (w >= kDropThreshold) weights.emplace_back(w, probe.eigenvectors().col(k));
  }

  std::vector<std::vector<Operator>> ops;
  for (const auto& p : probe_projectors) {
    Eigen::SelfAdjointEigenSolver<Operator> range(0.5 * (p + p.adjoint()));
    std::vector<Operator> outcome;
    for (Index j = 0; j < dp; ++j) {
      if (range.eigenvalues()(j) < 0.5) continue;
      const StateVector bra = range.eigenvectors().col(j);
      for (const auto& [w, psi] : weights) {
        outcome.push_back(std::sqrt(w) * env_matrix_element(s_tot, ds, dp, bra, psi));
      }
    }
    if (outcome.empty()) outcome.push_back(Operator::Zero(ds, ds));
    ops.push_back(std::move(outcome));
  }

  // Effects straight from the defining partial trace.
  const CompositeSpace space({ds, dp});
  const Operator probe_state = kron(identity(ds), rho_probe.matrix());
  std::vector<Operator> effects;
  for (const auto& p : probe_projectors) {
    const Operator product = s_tot.adjoint() * kron(identity(ds), p) * s_tot * probe_state;
    const Operator f = partial_trace(product, space, 0);
    effects.push_back(0.5 * (f + f.adjoint()));
  }
  return {Povm(std::move(effects)), Measurement(std::move(ops))};
}

}  // namespace decolab
