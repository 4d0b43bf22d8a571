#pragma once

// Dense complex linear algebra shared by every physics module: operators,
// validated density operators, superoperators on column-stacked vectors and
// composite Hilbert spaces.
//
// Units: hbar = k_B = 1 everywhere in the library.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace decolab {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double positivity = 1e-8;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Inputs outside an operation's mathematical domain (negative temperature,
/// non-unitary scattering operator, zero-probability outcome, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine (quadrature, bisection, ODE) failed to
/// reach its tolerance. `estimate()` carries the best value obtained.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double estimate)
      : Error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

bool is_finite(const Operator& op);
bool is_hermitian(const Operator& op, double tolerance = tol::hermitian);
bool is_unitary(const Operator& op, double tolerance = 1e-10);
Operator dagger(const Operator& op);
/// (op + op^dag) / 2.
Operator hermitian_part(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);
Operator kron(const Operator& a, const Operator& b);
Operator identity(Index dim);
Operator projector(const StateVector& psi);

/// Smallest eigenvalue of the hermitian part of `op`.
double min_eigenvalue(const Operator& op);

/// Hermitian, unit-trace, positive matrix. Construction validates against
/// tol::hermitian, tol::trace and tol::positivity and throws DomainError.
class DensityOperator {
 public:
  explicit DensityOperator(Operator matrix);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(Index dim);

  const Operator& matrix() const noexcept { return matrix_; }
  Index dim() const noexcept { return matrix_.rows(); }
  double purity() const;
  cplx operator()(Index row, Index col) const { return matrix_(row, col); }

 private:
  Operator matrix_;
};

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
StateVector vectorize(const Operator& op);
Operator devectorize(const StateVector& vec, Index dim);

/// Linear map on dim x dim operators, stored as a dim^2 x dim^2 matrix acting
/// on column-stacked vectors.
class SuperOperator {
 public:
  SuperOperator(Index dim, Eigen::MatrixXcd matrix);

  static SuperOperator zero(Index dim);
  /// X -> left X right
  static SuperOperator sandwich(const Operator& left, const Operator& right);

  Index dim() const noexcept { return dim_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Operator apply(const Operator& op) const;

  SuperOperator operator+(const SuperOperator& other) const;
  SuperOperator operator*(cplx scale) const;

 private:
  Index dim_;
  Eigen::MatrixXcd matrix_;
};

/// Ordered tensor factors H_0 (x) H_1 (x) ...; the first factor is the most
/// significant index, matching kron().
class CompositeSpace {
 public:
  explicit CompositeSpace(std::vector<Index> dims);

  const std::vector<Index>& dims() const noexcept { return dims_; }
  Index total_dim() const noexcept { return total_; }
  std::size_t size() const noexcept { return dims_.size(); }

 private:
  std::vector<Index> dims_;
  Index total_;
};

/// Traces out every factor except `keep`.
Operator partial_trace(const Operator& op, const CompositeSpace& space,
                       std::size_t keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              const CompositeSpace& space, std::size_t keep);

/// exp(L t) applied to vec(rho). t must be non-negative.
DensityOperator expm_apply(const SuperOperator& generator,
                           const DensityOperator& rho, double t);
Operator expm_apply(const SuperOperator& generator, const Operator& op,
                    double t);

/// Dense matrix exponential exp(A).
Operator expm(const Operator& a);

double trace_distance(const Operator& rho, const Operator& sigma);
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Positive square root of a hermitian PSD matrix; eigenvalues below zero are
/// clipped.
Operator sqrtm_psd(const Operator& op);

}  // namespace decolab
