#include "decolab/dephasing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decolab/quadrature.hpp"

namespace decolab::dephasing {
namespace {

constexpr double kCothCutoff = 30.0;
constexpr std::size_t kMaxPanels = 200'000;

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

void check_temperature(double temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw DomainError("temperature must be finite and non-negative");
  }
}

// coth(w/2T) - 1 = 2 / (exp(w/T) - 1), with the overflow guard.
double thermal_weight(double omega, double temperature) {
  if (temperature == 0.0) return 0.0;
  const double x = omega / (2.0 * temperature);
  if (x > kCothCutoff) return 0.0;
  return 2.0 / std::expm1(2.0 * x);
}

double coth_weight(double omega, double temperature) {
  return 1.0 + thermal_weight(omega, temperature);
}

// 2 sin^2(wt/2) / w^2 = (1 - cos wt)/w^2 without cancellation.
double dephasing_kernel(double omega, double t) {
  const double s = std::sin(0.5 * omega * t);
  return 2.0 * s * s / (omega * omega);
}

std::vector<double> panel_breakpoints(double hi, double t) {
  // Panels of about four oscillation periods; never fewer than 16.
  double width = hi / 16.0;
  if (t > 0.0) width = std::min(width, 8.0 * std::numbers::pi / t);
  std::size_t panels = static_cast<std::size_t>(std::ceil(hi / width));
  panels = std::clamp<std::size_t>(panels, 16, kMaxPanels);
  std::vector<double> points(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    points[i] = hi * static_cast<double>(i) / static_cast<double>(panels);
  }
  points.back() = hi;
  return points;
}

double integrate_kernel(const quad::Integrand& f, double hi, double t, double rel_tol) {
  const auto points = panel_breakpoints(hi, t);
  quad::Options options;
  options.rel_tol = rel_tol;
  options.abs_tol = 1e-300;
  return quad::adaptive(f, points, options).value;
}

}  // namespace

SpectralDensity::SpectralDensity(double a_, double omega_c_, int d_)
    : a(a_), omega_c(omega_c_), d(d_) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("damping strength a must be positive");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
    throw DomainError("cutoff frequency must be positive");
  }
  if (d < 1 || d > 3) throw DomainError("spectral dimension d must be 1, 2 or 3");
}

double SpectralDensity::operator()(double omega) const {
  if (omega <= 0.0) return 0.0;
  const double x = omega / omega_c;
  return a * omega * std::pow(x, d - 1) * std::exp(-x);
}

cplx alpha_k(cplx g, double omega, double t) {
  if (!(omega > 0.0)) throw DomainError("mode frequency must be positive");
  check_time(t);
  // 1 - exp(i w t) = -2i sin(wt/2) exp(i wt/2); exact zero at t = 0.
  const double half = 0.5 * omega * t;
  return 2.0 * g * (-2.0 * kI * std::sin(half) * std::exp(kI * half)) / omega;
}

cplx chi_vacuum_discrete(const BathModes& bath, double t) {
  return chi_thermal_discrete(bath, 0.0, t);
}

cplx chi_thermal_discrete(const BathModes& bath, double temperature, double t) {
  check_time(t);
  check_temperature(temperature);
  double exponent = 0.0;
  for (const auto& mode : bath) {
    if (!(mode.omega > 0.0)) throw DomainError("mode frequency must be positive");
    const double kernel = dephasing_kernel(mode.omega, t);
    exponent += 4.0 * std::norm(mode.g) * kernel * coth_weight(mode.omega, temperature);
  }
  return std::exp(-exponent);
}

BathModes discretize(const SpectralDensity& j, std::size_t n_modes, double omega_max_) {
  if (n_modes == 0) throw DomainError("need at least one mode");
  if (!(omega_max_ > 0.0)) throw DomainError("maximum frequency must be positive");
  const double dw = omega_max_ / static_cast<double>(n_modes);
  BathModes modes;
  modes.reserve(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double w = (static_cast<double>(k) + 0.5) * dw;
    modes.push_back({std::sqrt(j(w) * dw / 4.0), w});
  }
  return modes;
}

double omega_max(const SpectralDensity& j, double temperature) {
  return j.omega_c * std::max(50.0, 50.0 * temperature / j.omega_c);
}

double F_vac(const SpectralDensity& j, double t, double rel_tol) {
  check_time(t);
  if (t == 0.0) return 0.0;
  const auto f = [&](double w) { return j(w) * dephasing_kernel(w, t); };
  return integrate_kernel(f, omega_max(j, 0.0), t, rel_tol);
}

double F_th(const SpectralDensity& j, double temperature, double t, double rel_tol) {
  check_time(t);
  check_temperature(temperature);
  if (t == 0.0 || temperature == 0.0) return 0.0;
  // Beyond w = 2 * kCothCutoff * T the weight is exactly zero.
  const double hi = std::min(omega_max(j, temperature), 2.0 * kCothCutoff * temperature);
  const auto f = [&](double w) {
    return j(w) * dephasing_kernel(w, t) * thermal_weight(w, temperature);
  };
  return integrate_kernel(f, hi, t, rel_tol);
}

double F_vac_ohmic_closed(double a, double omega_c, double t) {
  const double x = omega_c * t;
  return 0.5 * a * std::log1p(x * x);
}

double thermal_time(double temperature) {
  if (!(temperature > 0.0)) throw DomainError("thermal time needs a positive temperature");
  return 1.0 / (std::numbers::pi * temperature);
}

double F_th_ohmic_closed(double a, double temperature, double t) {
  const double x = t / thermal_time(temperature);
  if (x < 1e-4) return a * x * x / 6.0;
  if (x > 20.0) {
    return a * (x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2 - std::log(x));
  }
  return a * std::log(std::sinh(x) / x);
}

double trigamma(double x) {
  if (!(x > 0.0)) throw DomainError("trigamma implemented for positive arguments only");
  double acc = 0.0;
  while (x <= 6.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/2x^2 + sum_k B_2k / x^(2k+1)
  const double tail =
      1.0 / 6.0 +
      inv2 * (-1.0 / 30.0 +
              inv2 * (1.0 / 42.0 +
                      inv2 * (-1.0 / 30.0 +
                              inv2 * (5.0 / 66.0 + inv2 * (-691.0 / 2730.0 + inv2 * 7.0 / 6.0)))));
  const double series = inv + 0.5 * inv2 + inv * inv2 * tail;
  return acc + series;
}

double F_superohmic_limit(const SpectralDensity& j, double temperature) {
  if (j.d != 3) throw DomainError("plateau formula holds for d = 3 only");
  check_temperature(temperature);
  const double r = temperature / j.omega_c;
  return 2.0 * j.a * r * r * trigamma(1.0 + r);
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::short_time:
      return "short_time";
    case Regime::vacuum:
      return "vacuum";
    case Regime::thermal:
      return "thermal";
  }
  return "unknown";
}

RegimeEstimate classify_regime(const SpectralDensity& j, double temperature, double t) {
  if (j.d != 1) throw DomainError("regime classification is defined for Ohmic baths only");
  check_time(t);
  if (!(temperature > 0.0)) throw DomainError("regime classification needs T > 0");
  const double cutoff_time = 1.0 / j.omega_c;
  const double matsubara_time = 1.0 / (2.0 * std::numbers::pi * temperature);
  if (cutoff_time >= matsubara_time) {
    std::ostringstream msg;
    msg << "regimes undefined: cutoff time " << cutoff_time << " is not below Matsubara time "
        << matsubara_time;
    throw DomainError(msg.str());
  }
  if (t <= cutoff_time) {
    return {Regime::short_time, 0.5 * j.a * j.omega_c * j.omega_c * t * t};
  }
  if (t <= matsubara_time) return {Regime::vacuum, j.a * std::log(j.omega_c * t)};
  return {Regime::thermal, j.a * t / thermal_time(temperature)};
}

std::uint64_t n_qubit_weight(unsigned n_qubits, std::uint64_t m, std::uint64_t n,
                             Coupling coupling) {
  if (n_qubits == 0 || n_qubits > 63) throw DomainError("qubit count must be in 1..63");
  const std::uint64_t limit = std::uint64_t{1} << n_qubits;
  if (m >= limit || n >= limit) throw DomainError("basis index exceeds 2^N - 1");
  if (coupling == Coupling::different_reservoirs) {
    return static_cast<std::uint64_t>(std::popcount(m ^ n));
  }
  const std::int64_t diff = static_cast<std::int64_t>(std::popcount(m)) -
                            static_cast<std::int64_t>(std::popcount(n));
  return static_cast<std::uint64_t>(diff * diff);
}

double n_qubit_coherence(unsigned n_qubits, std::uint64_t m, std::uint64_t n,
                         Coupling coupling, double F) {
  return std::exp(-static_cast<double>(n_qubit_weight(n_qubits, m, n, coupling)) * F);
}

std::vector<std::vector<std::uint64_t>> dfs_states(unsigned n_qubits) {
  if (n_qubits == 0 || n_qubits > 24) throw DomainError("qubit count must be in 1..24");
  std::vector<std::vector<std::uint64_t>> groups(n_qubits + 1);
  const std::uint64_t limit = std::uint64_t{1} << n_qubits;
  for (std::uint64_t s = 0; s < limit; ++s) {
    groups[static_cast<std::size_t>(std::popcount(s))].push_back(s);
  }
  return groups;
}

}  // namespace decolab::dephasing
