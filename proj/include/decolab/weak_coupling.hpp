#pragma once

// Born-Markov-secular master equations: eigenoperator decomposition of the
// coupling operators, bath spectra, Lamb shift and the resulting generator.

#include <functional>
#include <vector>

#include "decolab/core.hpp"
#include "decolab/lindblad.hpp"

namespace decolab::weak {

/// Bath rates gamma(w) (hermitian PSD) and shifts S(w) (hermitian), both K x K,
/// evaluated only at Bohr frequencies. An empty `shift` means S = 0.
struct BathSpectrum {
  std::function<Eigen::MatrixXcd(double)> gamma;
  std::function<Eigen::MatrixXcd(double)> shift;
};

struct EigenoperatorDecomposition {
  Operator hamiltonian;
  std::vector<double> levels;            // distinct energies, ascending
  std::vector<Operator> level_projectors;
  std::vector<double> bohr_frequencies;  // ascending, pairwise distinct
  /// ops[i][k] = A_k(bohr_frequencies[i])
  std::vector<std::vector<Operator>> ops;
  std::size_t n_couplings = 0;
  /// Smallest distance between two distinct Bohr frequencies (infinity when
  /// fewer than two).
  double min_bohr_gap = 0.0;
  /// True when H has degenerate levels.
  bool degenerate = false;
  double merge_tolerance = 0.0;
};

/// A_k(w) = sum over E' - E = w of P_E A_k P_E'. Levels and Bohr frequencies
/// closer than 1e-9 max(1, |H|) are merged; frequencies at which every A_k(w)
/// vanishes are omitted.
EigenoperatorDecomposition decompose_eigenoperators(const Operator& hamiltonian,
                                                    const std::vector<Operator>& couplings);

/// H_Lamb = sum_w sum_kl S_kl(w) A_k(w)^dag A_l(w).
Operator lamb_shift(const EigenoperatorDecomposition& decomp, const BathSpectrum& spectrum);

/// Secular generator with channels from diagonalizing gamma(w) at each Bohr
/// frequency and H + H_Lamb as Hamiltonian. Throws DomainError naming the
/// frequency when gamma(w) is not PSD (eigenvalue below -1e-10).
LindbladGenerator build_secular_generator(const EigenoperatorDecomposition& decomp,
                                          const BathSpectrum& spectrum);

struct SplitMatrices {
  Eigen::MatrixXcd gamma;
  Eigen::MatrixXcd shift;
};

/// gamma = Gamma + Gamma^dag, S = (Gamma - Gamma^dag) / 2i, so Gamma = gamma/2 + iS.
SplitMatrices split_halfline_transform(const Eigen::MatrixXcd& big_gamma);
BathSpectrum split_halfline_transform(std::function<Eigen::MatrixXcd(double)> big_gamma);

}  // namespace decolab::weak
