#pragma once

// One-dimensional quadrature used by the dephasing, trajectory and
// collisional modules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace decolab::quad {

using Integrand = std::function<double(double)>;

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2'000'000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) on [a, b], always bisecting the
/// sub-interval with the largest error estimate. The interval is first split
/// into `initial_panels` equal pieces, which matters for oscillatory
/// integrands. Throws ConvergenceError (carrying the estimate) when the
/// interval budget is exhausted.
Result adaptive(const Integrand& f, double a, double b, const Options& options = {},
                std::size_t initial_panels = 1);

/// Same, with the initial partition given explicitly by sorted breakpoints
/// (including both end points).
Result adaptive(const Integrand& f, std::span<const double> breakpoints,
                const Options& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct LegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; safe to call concurrently.
const LegendreRule& legendre_rule(std::size_t order);

double legendre(const Integrand& f, double a, double b, std::size_t order);

/// Gauss-Legendre with node doubling from `start_order` until two successive
/// estimates agree to `rel_tol` (or absolutely to `abs_tol`).
double legendre_doubling(const Integrand& f, double a, double b,
                         double rel_tol = 1e-8, double abs_tol = 0.0,
                         std::size_t start_order = 64, std::size_t max_order = 16384);

}  // namespace decolab::quad
