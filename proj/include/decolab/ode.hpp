#pragma once

// Adaptive Dormand-Prince 5(4) integrator for Eigen-valued states
// (vectors or matrices, real or complex).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "decolab/core.hpp"

namespace decolab::ode {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 selects a heuristic first step
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

struct NoObserver {
  template <class State>
  void operator()(double, State&) const {}
};

/// Integrates y' = rhs(t, y) from t0 to t1 and returns y(t1). After every
/// accepted step `observer(t, y)` runs and may modify y in place (used for
/// renormalization). Throws ConvergenceError if the step size underflows or
/// the step budget is exhausted.
template <class State, class Rhs, class Observer = NoObserver>
State dormand_prince(Rhs&& rhs, State y, double t0, double t1, const Options& opt = {},
                     Observer&& observer = {}, Stats* stats = nullptr) {
  if (!(t1 >= t0)) throw DomainError("integration end time precedes start time");
  if (t1 == t0) return y;

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto error_norm = [&](const State& err, const State& y0, const State& y1) {
    double worst = 0.0;
    for (Index i = 0; i < err.size(); ++i) {
      const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0.data()[i]),
                                                                 std::abs(y1.data()[i]));
      worst = std::max(worst, std::abs(err.data()[i]) / scale);
    }
    return worst;
  };

  double t = t0;
  State k1 = rhs(t, y);
  double h = opt.initial_step;
  if (h <= 0.0) {
    double ynorm = 0.0, dnorm = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
      ynorm = std::max(ynorm, std::abs(y.data()[i]));
      dnorm = std::max(dnorm, std::abs(k1.data()[i]));
    }
    h = (dnorm > 0.0) ? 0.01 * std::max(ynorm, 1e-6) / dnorm : (t1 - t0);
    h = std::min(h, t1 - t0);
  }
  h = std::min(h, opt.max_step);

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) {
      std::ostringstream msg;
      msg << "ODE integration exceeded " << opt.max_steps << " steps at t = " << t;
      throw ConvergenceError(msg.str(), t);
    }
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 =
        rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 =
        rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = rhs(t + h, y_new);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y_new);

    if (std::isfinite(en) && en <= 1.0) {
      t = last ? t1 : t + h;
      y = std::move(y_new);
      observer(t, y);
      // FSAL: k7 is the derivative at the new point unless the observer changed y.
      k1 = rhs(t, y);
      if (stats) ++stats->accepted;
      const double factor = (en == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(h * factor, opt.max_step);
    } else {
      if (stats) ++stats->rejected;
      const double factor = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9)
                                              : 0.1;
      h *= factor;
      if (h <= 1e-15 * std::max(1.0, std::abs(t))) {
        std::ostringstream msg;
        msg << "ODE step size underflow at t = " << t;
        throw ConvergenceError(msg.str(), t);
      }
    }
  }
  return y;
}

}  // namespace decolab::ode
