#include "decolab/collisional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "decolab/quadrature.hpp"

namespace decolab::collisional {
namespace {

using std::numbers::pi;

constexpr double kSpeedWindow = 8.0;  // thermal units kept in velocity integrals
constexpr double kAngularRelTol = 1e-8;
constexpr double kSpeedRelTol = 1e-10;
// m v x beyond which the angular sinc integral uses its large-argument expansion.
constexpr double kAsymptoticSinc = 2000.0;

void check_finite_nonneg(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
}

double one_minus_sinc(double z) {
  const double z2 = z * z;
  if (std::abs(z) < 1e-3) return z2 / 6.0 - z2 * z2 / 120.0;
  return 1.0 - std::sin(z) / z;
}

// int_{-1}^{1} g(c) dc with c = 1 - 2u^2, u = sin(theta/2) in [0, 1], which
// keeps momentum-transfer dependent integrands smooth.
double angular_integral(const std::function<double(double)>& g) {
  const auto integrand = [&](double u) { return 4.0 * u * g(1.0 - 2.0 * u * u); };
  return quad::legendre_doubling(integrand, 0.0, 1.0, kAngularRelTol, 1e-300);
}

quad::Options speed_options() {
  quad::Options options;
  options.rel_tol = kSpeedRelTol;
  options.abs_tol = 1e-300;
  options.max_intervals = 20'000;
  return options;
}

// int nu(v) g(v) dv over v >= 0, with v = v_th s and nu dv = (4/sqrt(pi)) s^2 exp(-s^2) ds.
double speed_average(const GasModel& gas, const std::function<double(double)>& g) {
  const double vth = gas.thermal_speed();
  const auto integrand = [&](double s) {
    return 4.0 / std::sqrt(pi) * s * s * std::exp(-s * s) * g(vth * s);
  };
  return quad::adaptive(integrand, 0.0, kSpeedWindow, speed_options(), 8).value;
}

// int nu(v) g(v, v_out) dv for an inelastic transition absorbing `delta_e`
// from the gas particle; zero below the threshold v^2 = 2 delta_e / m.
double speed_average_inelastic(const GasModel& gas, double delta_e,
                               const std::function<double(double, double)>& g) {
  const double vth = gas.thermal_speed();
  const double shift = 2.0 * delta_e / gas.mass;  // v_out^2 = v^2 - shift
  if (delta_e <= 0.0) {
    const auto integrand = [&](double s) {
      const double v = vth * s;
      return 4.0 / std::sqrt(pi) * s * s * std::exp(-s * s) * g(v, std::sqrt(v * v - shift));
    };
    return quad::adaptive(integrand, 0.0, kSpeedWindow, speed_options(), 8).value;
  }
  // s = s_thr + w^2 removes the square-root edge at threshold.
  const double s_thr = std::sqrt(shift) / vth;
  const double w_max = std::sqrt(kSpeedWindow);
  const auto integrand = [&](double w) {
    const double s = s_thr + w * w;
    const double v = vth * s;
    const double v_out = vth * w * std::sqrt(2.0 * s_thr + w * w);
    return 2.0 * w * 4.0 / std::sqrt(pi) * s * s * std::exp(-s * s) * g(v, v_out);
  };
  return quad::adaptive(integrand, 0.0, w_max, speed_options(), 8).value;
}

double kinetic_energy(const GasModel& gas, double v) { return 0.5 * gas.mass * v * v; }

// Partial-wave coefficients (2l+1) e^{i d_l} sin d_l / k for a hard sphere.
std::vector<cplx> hard_sphere_coefficients(double radius, double k) {
  std::vector<cplx> coeffs;
  const double x = k * radius;
  for (unsigned l = 0; l < 20000; ++l) {
    const double j = std::sph_bessel(l, x);
    const double y = std::sph_neumann(l, x);
    const double delta = (std::isfinite(y) && y != 0.0) ? std::atan(j / y) : 0.0;
    const cplx c = static_cast<double>(2 * l + 1) * std::exp(kI * delta) * std::sin(delta) / k;
    coeffs.push_back(c);
    if (static_cast<double>(l) > x && std::abs(c) < 1e-8 * radius) break;
  }
  return coeffs;
}

}  // namespace

GasModel::GasModel(double n, double m, double t) : n_gas(n), mass(m), temperature(t) {
  if (!(n_gas > 0.0) || !std::isfinite(n_gas)) throw DomainError("gas density must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("gas mass must be positive");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw DomainError("gas temperature must be positive");
  }
}

double GasModel::thermal_speed() const { return std::sqrt(2.0 * temperature / mass); }

double GasModel::mean_speed() const { return std::sqrt(8.0 * temperature / (pi * mass)); }

Amplitude constant_amplitude(cplx f0) {
  return [f0](double, double) { return f0; };
}

Amplitude hard_sphere_amplitude(double radius, double mass) {
  if (!(radius > 0.0) || !(mass > 0.0)) {
    throw DomainError("hard-sphere radius and mass must be positive");
  }
  return [radius, mass](double c, double energy) -> cplx {
    check_finite_nonneg(energy, "collision energy");
    const double k = std::sqrt(2.0 * mass * energy);
    if (k * radius < 1e-10) return -radius;
    thread_local double cached_radius = -1.0, cached_k = -1.0;
    thread_local std::vector<cplx> coeffs;
    if (cached_radius != radius || cached_k != k) {
      coeffs = hard_sphere_coefficients(radius, k);
      cached_radius = radius;
      cached_k = k;
    }
    cplx sum = 0.0;
    double p0 = 1.0, p1 = c;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
      double pl;
      if (l == 0) {
        pl = p0;
      } else if (l == 1) {
        pl = p1;
      } else {
        const double ll = static_cast<double>(l);
        pl = ((2.0 * ll - 1.0) * c * p1 - (ll - 1.0) * p0) / ll;
        p0 = p1;
        p1 = pl;
      }
      sum += coeffs[l] * pl;
    }
    return sum;
  };
}

double maxwell_speed_pdf(const GasModel& gas, double v) {
  if (!(v >= 0.0)) throw DomainError("speed must be non-negative");
  const double a = gas.mass / (2.0 * pi * gas.temperature);
  return 4.0 * pi * a * std::sqrt(a) * v * v *
         std::exp(-gas.mass * v * v / (2.0 * gas.temperature));
}

double cross_section(const Amplitude& f, double energy) {
  check_finite_nonneg(energy, "collision energy");
  return 2.0 * pi * angular_integral([&](double c) { return std::norm(f(c, energy)); });
}

double total_collision_rate(const Amplitude& f, const GasModel& gas) {
  return speed_average(gas, [&](double v) {
    return gas.n_gas * v * cross_section(f, kinetic_energy(gas, v));
  });
}

double localization_rate(const Amplitude& f, const GasModel& gas, double x) {
  check_finite_nonneg(x, "separation");
  if (x == 0.0) return 0.0;
  return speed_average(gas, [&](double v) {
    const double energy = kinetic_energy(gas, v);
    const double mvx = gas.mass * v * x;
    double angular = 0.0;
    if (mvx < kAsymptoticSinc) {
      angular = angular_integral([&](double c) {
        const double two_sin_half = std::sqrt(std::max(0.0, 2.0 * (1.0 - c)));
        return std::norm(f(c, energy)) * one_minus_sinc(two_sin_half * mvx);
      });
    } else {
      // Too oscillatory for node doubling. With h(u) = |f(1 - 2u^2)|^2 the sinc
      // part is (2/z) int_0^1 h sin(2zu) du = (h(0) - h(1) cos 2z) / z^2 + O(z^-3).
      const double forward = std::norm(f(1.0, energy)), backward = std::norm(f(-1.0, energy));
      angular = angular_integral([&](double c) { return std::norm(f(c, energy)); }) -
                (forward - backward * std::cos(2.0 * mvx)) / (mvx * mvx);
    }
    return gas.n_gas * v * 2.0 * pi * angular;
  });
}

double momentum_gain_rate(const Amplitude& f, const GasModel& gas, double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("momentum transfer must be >= 0");
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  const double m = gas.mass;
  const double scale = std::sqrt(2.0 * m * gas.temperature);  // p = scale * s
  const double s_lo = 0.5 * q / scale;
  const auto integrand = [&](double s) {
    const double p = scale * s;
    const double c = 1.0 - q * q / (2.0 * p * p);
    return s * std::exp(-s * s) * std::norm(f(std::clamp(c, -1.0, 1.0), p * p / (2.0 * m)));
  };
  const double integral =
      quad::adaptive(integrand, s_lo, s_lo + kSpeedWindow, speed_options(), 8).value;
  const double prefactor = 2.0 * pi * gas.n_gas / (m * q) * (2.0 * m * gas.temperature) /
                           std::pow(2.0 * pi * m * gas.temperature, 1.5);
  return prefactor * integral;
}

std::vector<double> momentum_gain_rate(const Amplitude& f, const GasModel& gas,
                                       std::span<const double> q_grid) {
  std::vector<double> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) out.push_back(momentum_gain_rate(f, gas, q));
  return out;
}

double momentum_transfer_cutoff(const GasModel& gas) {
  return 2.0 * kSpeedWindow * std::sqrt(2.0 * gas.mass * gas.temperature);
}

double momentum_gain_total(const Amplitude& f, const GasModel& gas) {
  const auto integrand = [&](double q) {
    return 4.0 * pi * q * q * momentum_gain_rate(f, gas, q);
  };
  quad::Options options;
  options.rel_tol = 1e-9;
  options.abs_tol = 1e-300;
  options.max_intervals = 20'000;
  return quad::adaptive(integrand, 0.0, momentum_transfer_cutoff(gas), options, 8).value;
}

double localization_rate_from_gain(const Amplitude& f, const GasModel& gas, double x) {
  if (!(x >= 0.0)) throw DomainError("separation must be non-negative");
  if (x == 0.0) return 0.0;
  const double q_max = momentum_transfer_cutoff(gas);
  const auto integrand = [&](double q) {
    return 4.0 * pi * q * q * one_minus_sinc(q * x) * momentum_gain_rate(f, gas, q);
  };
  quad::Options options;
  options.rel_tol = 1e-9;
  options.abs_tol = 1e-300;
  options.max_intervals = 50'000;
  const std::size_t panels =
      std::max<std::size_t>(8, static_cast<std::size_t>(q_max * x / (8.0 * pi)) + 1);
  return quad::adaptive(integrand, 0.0, q_max, options, panels).value;
}

namespace {

void check_spec(const ChannelSpec& spec) {
  if (spec.energies.empty()) throw DimensionError("need at least one channel");
  for (double e : spec.energies) {
    if (!std::isfinite(e)) throw DomainError("channel energies must be finite");
  }
  for (const auto& [key, amp] : spec.amplitudes) {
    if (key.first >= spec.size() || key.second >= spec.size()) {
      throw DimensionError("amplitude refers to a channel out of range");
    }
    if (!amp) throw DomainError("amplitude callable is empty");
  }
}

const Amplitude* find_amplitude(const ChannelSpec& spec, std::size_t a, std::size_t a0) {
  const auto it = spec.amplitudes.find({a, a0});
  return it == spec.amplitudes.end() ? nullptr : &it->second;
}

}  // namespace

RateTensor dot_rate_tensor(const ChannelSpec& spec, const GasModel& gas) {
  check_spec(spec);
  const std::size_t n = spec.size();
  RateTensor out;
  out.n = n;
  out.energies = spec.energies;
  out.matrix = Eigen::MatrixXcd::Zero(static_cast<Index>(n * n), static_cast<Index>(n * n));
  double e_scale = 1.0;
  for (double e : spec.energies) e_scale = std::max(e_scale, std::abs(e));
  const double chi_tol = 1e-12 * e_scale;

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t a0 = 0; a0 < n; ++a0) {
      const Amplitude* fa = find_amplitude(spec, a, a0);
      if (!fa) continue;
      const double delta = spec.energies[a] - spec.energies[a0];
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t b0 = 0; b0 < n; ++b0) {
          const Amplitude* fb = find_amplitude(spec, b, b0);
          if (!fb) continue;
          if (std::abs(delta - (spec.energies[b] - spec.energies[b0])) > chi_tol) continue;
          const Index row = static_cast<Index>(a * n + a0);
          const Index col = static_cast<Index>(b * n + b0);
          if (col < row) continue;  // filled from hermiticity below
          auto part = [&](bool imaginary) {
            return speed_average_inelastic(gas, delta, [&](double v, double v_out) {
              const double energy = kinetic_energy(gas, v);
              const double angular = angular_integral([&](double c) {
                const cplx prod = (*fa)(c, energy) * std::conj((*fb)(c, energy));
                return imaginary ? prod.imag() : prod.real();
              });
              return gas.n_gas * v_out * 2.0 * pi * angular;
            });
          };
          const double re = part(false);
          const double im = (row == col) ? 0.0 : part(true);
          out.matrix(row, col) = cplx(re, im);
          out.matrix(col, row) = cplx(re, -im);
        }
      }
    }
  }
  out.shifts = energy_shifts(spec, gas);
  return out;
}

double elastic_dephasing_rate(const Amplitude& f_aa, const Amplitude& f_bb, const GasModel& gas) {
  return speed_average(gas, [&](double v) {
    const double energy = kinetic_energy(gas, v);
    const double angular = angular_integral(
        [&](double c) { return std::norm(f_aa(c, energy) - f_bb(c, energy)); });
    return pi * gas.n_gas * v * angular;
  });
}

std::vector<double> energy_shifts(const ChannelSpec& spec, const GasModel& gas) {
  check_spec(spec);
  std::vector<double> out(spec.size(), 0.0);
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const Amplitude* f = find_amplitude(spec, a, a);
    if (!f) continue;
    const double avg =
        speed_average(gas, [&](double v) { return (*f)(1.0, kinetic_energy(gas, v)).real(); });
    out[a] = -2.0 * pi * gas.n_gas / gas.mass * avg;
  }
  return out;
}

Operator dot_master_rhs(const Operator& rho, const RateTensor& tensor) {
  const Index n = static_cast<Index>(tensor.n);
  if (rho.rows() != n || rho.cols() != n) throw DimensionError("state does not match channels");
  Operator out = Operator::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    const double e = tensor.energies[static_cast<std::size_t>(a)] +
                     tensor.shifts[static_cast<std::size_t>(a)];
    for (Index b = 0; b < n; ++b) {
      const double eb = tensor.energies[static_cast<std::size_t>(b)] +
                        tensor.shifts[static_cast<std::size_t>(b)];
      out(a, b) += -kI * (e - eb) * rho(a, b);
    }
  }
  Operator k = Operator::Zero(n, n);
  for (Index b0 = 0; b0 < n; ++b0) {
    for (Index a0 = 0; a0 < n; ++a0) {
      cplx s = 0.0;
      for (Index g = 0; g < n; ++g) s += tensor.matrix(g * n + a0, g * n + b0);
      k(b0, a0) = s;
    }
  }
  for (Index a = 0; a < n; ++a) {
    for (Index a0 = 0; a0 < n; ++a0) {
      for (Index b = 0; b < n; ++b) {
        for (Index b0 = 0; b0 < n; ++b0) {
          const cplx m = tensor.matrix(a * n + a0, b * n + b0);
          if (m != 0.0) out(a, b) += m * rho(a0, b0);
        }
      }
    }
  }
  out -= 0.5 * (k * rho + rho * k);
  return out;
}

Operator dot_master_rhs(const DensityOperator& rho, const ChannelSpec& spec, const GasModel& gas) {
  return dot_master_rhs(rho.matrix(), dot_rate_tensor(spec, gas));
}

SuperOperator dot_liouvillian(const RateTensor& tensor) {
  const Index n = static_cast<Index>(tensor.n);
  Eigen::MatrixXcd m(n * n, n * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      Operator unit = Operator::Zero(n, n);
      unit(i, j) = 1.0;
      m.col(j * n + i) = vectorize(dot_master_rhs(unit, tensor));
    }
  }
  return SuperOperator(n, std::move(m));
}

}  // namespace decolab::collisional
