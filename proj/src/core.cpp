#include "decolab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace decolab {

bool is_finite(const Operator& op) { return op.allFinite(); }

bool is_hermitian(const Operator& op, double tolerance) {
  if (op.rows() != op.cols()) return false;
  return (op - op.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_unitary(const Operator& op, double tolerance) {
  if (op.rows() != op.cols()) return false;
  const Operator defect = op.adjoint() * op - Operator::Identity(op.rows(), op.cols());
  return defect.cwiseAbs().maxCoeff() <= tolerance;
}

Operator dagger(const Operator& op) { return op.adjoint(); }

Operator hermitian_part(const Operator& op) { return 0.5 * (op + op.adjoint()); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator kron(const Operator& a, const Operator& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Operator identity(Index dim) { return Operator::Identity(dim, dim); }

Operator projector(const StateVector& psi) { return psi * psi.adjoint(); }

double min_eigenvalue(const Operator& op) {
  const Operator herm = 0.5 * (op + op.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityOperator::DensityOperator(Operator matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density operator must be a non-empty square matrix");
  }
  if (!matrix_.allFinite()) throw DomainError("density operator has non-finite entries");
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::hermitian) {
    std::ostringstream msg;
    msg << "density operator not hermitian (deviation " << herm << ")";
    throw DomainError(msg.str());
  }
  const cplx tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol::trace) {
    std::ostringstream msg;
    msg << "density operator trace " << tr.real() << " differs from 1";
    throw DomainError(msg.str());
  }
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < -tol::positivity) {
    std::ostringstream msg;
    msg << "density operator has negative eigenvalue " << lowest;
    throw DomainError(msg.str());
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw DomainError("cannot build a pure state from the zero vector");
  const StateVector unit = psi / norm;
  return DensityOperator(projector(unit));
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(identity(dim) / static_cast<double>(dim));
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

StateVector vectorize(const Operator& op) {
  return Eigen::Map<const StateVector>(op.data(), op.size());
}

Operator devectorize(const StateVector& vec, Index dim) {
  if (vec.size() != dim * dim) {
    throw DimensionError("vector length is not dim^2");
  }
  return Eigen::Map<const Operator>(vec.data(), dim, dim);
}

SuperOperator::SuperOperator(Index dim, Eigen::MatrixXcd matrix)
    : dim_(dim), matrix_(std::move(matrix)) {
  if (matrix_.rows() != dim * dim || matrix_.cols() != dim * dim) {
    throw DimensionError("superoperator matrix must be dim^2 x dim^2");
  }
}

SuperOperator SuperOperator::zero(Index dim) {
  return SuperOperator(dim, Eigen::MatrixXcd::Zero(dim * dim, dim * dim));
}

SuperOperator SuperOperator::sandwich(const Operator& left, const Operator& right) {
  if (left.rows() != right.rows()) throw DimensionError("sandwich operands differ in size");
  return SuperOperator(left.rows(), kron(right.transpose(), left));
}

Operator SuperOperator::apply(const Operator& op) const {
  if (op.rows() != dim_ || op.cols() != dim_) {
    throw DimensionError("operator does not match superoperator dimension");
  }
  return devectorize(matrix_ * vectorize(op), dim_);
}

SuperOperator SuperOperator::operator+(const SuperOperator& other) const {
  if (other.dim_ != dim_) throw DimensionError("superoperator dimensions differ");
  return SuperOperator(dim_, matrix_ + other.matrix_);
}

SuperOperator SuperOperator::operator*(cplx scale) const {
  return SuperOperator(dim_, matrix_ * scale);
}

CompositeSpace::CompositeSpace(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("composite space needs at least one factor");
  total_ = 1;
  for (Index d : dims_) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    total_ *= d;
  }
}

Operator partial_trace(const Operator& op, const CompositeSpace& space,
                       std::size_t keep) {
  if (keep >= space.size()) throw DimensionError("kept subsystem index out of range");
  if (op.rows() != space.total_dim() || op.cols() != space.total_dim()) {
    throw DimensionError("operator dimension does not match composite space");
  }
  const auto& dims = space.dims();
  const std::size_t n = dims.size();
  std::vector<Index> stride(n, 1);
  for (std::size_t f = n - 1; f-- > 0;) stride[f] = stride[f + 1] * dims[f + 1];

  const Index kept = dims[keep];
  const Index rest = space.total_dim() / kept;
  std::vector<Index> offsets(static_cast<std::size_t>(rest), 0);
  for (Index r = 0; r < rest; ++r) {
    Index remainder = r;
    Index offset = 0;
    for (std::size_t f = n; f-- > 0;) {
      if (f == keep) continue;
      offset += (remainder % dims[f]) * stride[f];
      remainder /= dims[f];
    }
    offsets[static_cast<std::size_t>(r)] = offset;
  }

  Operator result = Operator::Zero(kept, kept);
  for (Index a = 0; a < kept; ++a) {
    for (Index b = 0; b < kept; ++b) {
      cplx sum = 0.0;
      for (Index off : offsets) sum += op(a * stride[keep] + off, b * stride[keep] + off);
      result(a, b) = sum;
    }
  }
  return result;
}

DensityOperator partial_trace(const DensityOperator& rho, const CompositeSpace& space,
                              std::size_t keep) {
  return DensityOperator(partial_trace(rho.matrix(), space, keep));
}

Operator expm(const Operator& a) { return a.exp(); }

Operator expm_apply(const SuperOperator& generator, const Operator& op, double t) {
  if (!(t >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (!generator.matrix().allFinite() || !op.allFinite()) {
    throw DomainError("non-finite entries in expm_apply");
  }
  if (t == 0.0) return op;
  const Eigen::MatrixXcd propagator = (generator.matrix() * t).exp();
  if (!propagator.allFinite()) throw DomainError("matrix exponential overflowed");
  return devectorize(propagator * vectorize(op), generator.dim());
}

DensityOperator expm_apply(const SuperOperator& generator, const DensityOperator& rho,
                           double t) {
  if (t == 0.0) return rho;
  Operator out = expm_apply(generator, rho.matrix(), t);
  return DensityOperator(0.5 * (out + out.adjoint()));
}

double trace_distance(const Operator& rho, const Operator& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace_distance operands differ in dimension");
  }
  const Operator diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (diff + diff.adjoint()),
                                                 Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return std::min(1.0, trace_distance(rho.matrix(), sigma.matrix()));
}

Operator sqrtm_psd(const Operator& op) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (op + op.adjoint()));
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity operands differ in dimension");
  const Operator root = sqrtm_psd(rho.matrix());
  const Operator inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (inner + inner.adjoint()),
                                                 Eigen::EigenvaluesOnly);
  const double f = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(f * f, 0.0, 1.0);
}

}  // namespace decolab
