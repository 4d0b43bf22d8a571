#include "decolab/weak_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace decolab::weak {
namespace {

constexpr double kPsdFloor = -1e-10;

// Groups sorted values into runs whose consecutive gaps are within tol.
std::vector<std::vector<std::size_t>> cluster(const std::vector<double>& sorted, double tol) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (groups.empty() || sorted[i] - sorted[groups.back().back()] > tol) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

Eigen::MatrixXcd evaluate(const std::function<Eigen::MatrixXcd(double)>& f, double w,
                          std::size_t k, const char* what) {
  Eigen::MatrixXcd m = f(w);
  if (m.rows() != static_cast<Index>(k) || m.cols() != static_cast<Index>(k)) {
    std::ostringstream msg;
    msg << what << " at w = " << w << " must be " << k << " x " << k;
    throw DimensionError(msg.str());
  }
  if (!m.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
  return m;
}

}  // namespace

EigenoperatorDecomposition decompose_eigenoperators(const Operator& hamiltonian,
                                                    const std::vector<Operator>& couplings) {
  if (hamiltonian.rows() == 0 || hamiltonian.rows() != hamiltonian.cols()) {
    throw DimensionError("Hamiltonian must be a non-empty square matrix");
  }
  if (!is_hermitian(hamiltonian)) throw DomainError("Hamiltonian is not hermitian");
  if (couplings.empty()) throw DimensionError("need at least one coupling operator");
  const Index d = hamiltonian.rows();
  for (const auto& a : couplings) {
    if (a.rows() != d || a.cols() != d) throw DimensionError("coupling operator dimension");
    if (!is_hermitian(a)) throw DomainError("coupling operators must be hermitian");
  }

  EigenoperatorDecomposition out;
  out.hamiltonian = hamiltonian;
  out.n_couplings = couplings.size();
  Eigen::SelfAdjointEigenSolver<Operator> solver(hamiltonian);
  const Eigen::VectorXd& e = solver.eigenvalues();
  const double h_norm = e.cwiseAbs().maxCoeff();
  out.merge_tolerance = 1e-9 * std::max(1.0, h_norm);

  std::vector<double> energies(e.data(), e.data() + e.size());
  for (const auto& group : cluster(energies, out.merge_tolerance)) {
    double mean = 0.0;
    Operator p = Operator::Zero(d, d);
    for (std::size_t i : group) {
      mean += energies[i];
      const StateVector v = solver.eigenvectors().col(static_cast<Index>(i));
      p += v * v.adjoint();
    }
    out.levels.push_back(mean / static_cast<double>(group.size()));
    out.level_projectors.push_back(std::move(p));
    if (group.size() > 1) out.degenerate = true;
  }

  struct Pair {
    double omega;
    std::size_t lower, upper;  // omega = levels[upper] - levels[lower]
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < out.levels.size(); ++i) {
    for (std::size_t j = 0; j < out.levels.size(); ++j) {
      pairs.push_back({out.levels[j] - out.levels[i], i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.omega < b.omega;
  });
  std::vector<double> omegas;
  for (const auto& p : pairs) omegas.push_back(p.omega);

  for (const auto& group : cluster(omegas, out.merge_tolerance)) {
    double mean = 0.0;
    std::vector<Operator> ops(couplings.size(), Operator::Zero(d, d));
    for (std::size_t idx : group) {
      const Pair& p = pairs[idx];
      mean += p.omega;
      for (std::size_t k = 0; k < couplings.size(); ++k) {
        ops[k] += out.level_projectors[p.lower] * couplings[k] * out.level_projectors[p.upper];
      }
    }
    mean /= static_cast<double>(group.size());
    bool any = false;
    for (std::size_t k = 0; k < couplings.size(); ++k) {
      const double scale = std::max(1.0, couplings[k].norm());
      if (ops[k].norm() > 1e-12 * scale) {
        any = true;
      } else {
        ops[k].setZero();
      }
    }
    if (!any) continue;
    out.bohr_frequencies.push_back(std::abs(mean) <= out.merge_tolerance ? 0.0 : mean);
    out.ops.push_back(std::move(ops));
  }

  out.min_bohr_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.bohr_frequencies.size(); ++i) {
    out.min_bohr_gap =
        std::min(out.min_bohr_gap, out.bohr_frequencies[i] - out.bohr_frequencies[i - 1]);
  }
  return out;
}

Operator lamb_shift(const EigenoperatorDecomposition& decomp, const BathSpectrum& spectrum) {
  const Index d = decomp.hamiltonian.rows();
  Operator h = Operator::Zero(d, d);
  if (!spectrum.shift) return h;
  const std::size_t k = decomp.n_couplings;
  for (std::size_t i = 0; i < decomp.bohr_frequencies.size(); ++i) {
    const double w = decomp.bohr_frequencies[i];
    const Eigen::MatrixXcd s = evaluate(spectrum.shift, w, k, "shift matrix");
    if (!is_hermitian(s, 1e-10)) {
      std::ostringstream msg;
      msg << "shift matrix at w = " << w << " is not hermitian";
      throw DomainError(msg.str());
    }
    const auto& ops = decomp.ops[i];
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const cplx c = s(static_cast<Index>(a), static_cast<Index>(b));
        if (c != 0.0) h += c * ops[a].adjoint() * ops[b];
      }
    }
  }
  return 0.5 * (h + h.adjoint());
}

LindbladGenerator build_secular_generator(const EigenoperatorDecomposition& decomp,
                                          const BathSpectrum& spectrum) {
  if (!spectrum.gamma) throw DomainError("bath spectrum needs a rate function");
  const std::size_t k = decomp.n_couplings;
  std::vector<LindbladChannel> channels;
  for (std::size_t i = 0; i < decomp.bohr_frequencies.size(); ++i) {
    const double w = decomp.bohr_frequencies[i];
    const Eigen::MatrixXcd g = evaluate(spectrum.gamma, w, k, "rate matrix");
    if (!is_hermitian(g, 1e-10)) {
      std::ostringstream msg;
      msg << "rate matrix at w = " << w << " is not hermitian";
      throw DomainError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (g + g.adjoint()));
    for (Index j = 0; j < static_cast<Index>(k); ++j) {
      const double rate = solver.eigenvalues()(j);
      if (rate < kPsdFloor) {
        std::ostringstream msg;
        msg << "rate matrix at Bohr frequency w = " << w << " is not positive (eigenvalue "
            << rate << ")";
        throw DomainError(msg.str());
      }
      if (rate <= 0.0) continue;
      Operator l = Operator::Zero(decomp.hamiltonian.rows(), decomp.hamiltonian.cols());
      for (Index a = 0; a < static_cast<Index>(k); ++a) {
        l += std::conj(solver.eigenvectors()(a, j)) * decomp.ops[i][static_cast<std::size_t>(a)];
      }
      if (l.norm() == 0.0) continue;
      channels.push_back({rate, std::move(l)});
    }
  }
  Operator h = decomp.hamiltonian + lamb_shift(decomp, spectrum);
  return LindbladGenerator(0.5 * (h + h.adjoint()), std::move(channels));
}

SplitMatrices split_halfline_transform(const Eigen::MatrixXcd& big_gamma) {
  if (big_gamma.rows() != big_gamma.cols()) throw DimensionError("matrix must be square");
  const Eigen::MatrixXcd adj = big_gamma.adjoint();
  return {big_gamma + adj, (big_gamma - adj) / (2.0 * kI)};
}

BathSpectrum split_halfline_transform(std::function<Eigen::MatrixXcd(double)> big_gamma) {
  BathSpectrum out;
  out.gamma = [big_gamma](double w) { return split_halfline_transform(big_gamma(w)).gamma; };
  out.shift = [big_gamma](double w) { return split_halfline_transform(big_gamma(w)).shift; };
  return out;
}

}  // namespace decolab::weak
