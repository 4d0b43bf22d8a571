#pragma once

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "decolab/core.hpp"

namespace decolab::testing {

inline const Operator& pauli_x() {
  static const Operator m = (Operator(2, 2) << 0, 1, 1, 0).finished();
  return m;
}
inline const Operator& pauli_y() {
  static const Operator m = (Operator(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  return m;
}
inline const Operator& pauli_z() {
  static const Operator m = (Operator(2, 2) << 1, 0, 0, -1).finished();
  return m;
}
inline const Operator& lowering() {
  static const Operator m = (Operator(2, 2) << 0, 1, 0, 0).finished();
  return m;
}

inline StateVector basis_state(Index dim, Index k) {
  StateVector v = StateVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

inline StateVector plus_state() {
  StateVector v(2);
  v << 1.0, 1.0;
  return v / std::sqrt(2.0);
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }

  Operator ginibre(Index rows, Index cols) {
    Operator m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = cplx(normal(), normal());
    return m;
  }
  Operator ginibre(Index dim) { return ginibre(dim, dim); }

  Operator hermitian(Index dim) {
    const Operator g = ginibre(dim);
    return 0.5 * (g + g.adjoint());
  }

  // Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal fixed.
  Operator unitary(Index dim) {
    const Operator g = ginibre(dim);
    Eigen::HouseholderQR<Operator> qr(g);
    Operator q = qr.householderQ() * Operator::Identity(dim, dim);
    const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
  }

  StateVector state(Index dim) {
    StateVector v = ginibre(dim, 1).col(0);
    return v / v.norm();
  }

  // Random mixed state of full rank with a Ginibre ensemble.
  DensityOperator density(Index dim) {
    const Operator g = ginibre(dim);
    Operator rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityOperator(0.5 * (rho + rho.adjoint()));
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace decolab::testing
