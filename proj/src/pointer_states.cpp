#include "decolab/pointer_states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "decolab/ode.hpp"
#include "decolab/units.hpp"

namespace decolab::pointer {
namespace {

void check_vector(const StateVector& xi, const LindbladGenerator& gen) {
  if (xi.size() != gen.dim()) throw DimensionError("state does not match generator dimension");
  if (!xi.allFinite()) throw DomainError("state has non-finite entries");
}

}  // namespace

double linear_entropy_rate(const DensityOperator& rho, const LindbladGenerator& gen) {
  return -2.0 * (rho.matrix() * apply_generator(gen, rho.matrix())).trace().real();
}

StateVector nonlinear_rhs(const StateVector& xi, const LindbladGenerator& gen) {
  check_vector(xi, gen);
  StateVector out = -kI * (gen.hamiltonian() * xi);
  for (const auto& ch : gen.channels()) {
    if (ch.rate == 0.0) continue;
    const StateVector lx = ch.op * xi;
    const cplx mean_l = xi.dot(lx);
    const StateVector ldlx = ch.op.adjoint() * lx;
    const double mean_ldl = xi.dot(ldlx).real();
    out += ch.rate * (std::conj(mean_l) * (lx - mean_l * xi) - 0.5 * (ldlx - mean_ldl * xi));
  }
  return out;
}

Operator projector_rhs(const StateVector& xi, const LindbladGenerator& gen) {
  check_vector(xi, gen);
  const Operator p = xi * xi.adjoint();
  const Operator z = apply_generator(gen, p);
  return p * z + z * p - 2.0 * xi.dot(z * xi) * p;
}

std::vector<StateVector> evolve_robust(const StateVector& xi0, const LindbladGenerator& gen,
                                       const std::vector<double>& times,
                                       const FlowOptions& options, FlowStats* stats) {
  check_vector(xi0, gen);
  const double norm = xi0.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw DomainError("initial state must be normalized");
  ode::Options opt;
  opt.rel_tol = options.rel_tol;
  opt.abs_tol = options.abs_tol;
  if (options.max_step > 0.0) opt.max_step = options.max_step;

  auto rhs = [&](double, const StateVector& xi) { return nonlinear_rhs(xi, gen); };
  FlowStats local;
  auto renormalize = [&local](double, StateVector& xi) {
    const double n = xi.norm();
    const double drift = std::abs(n - 1.0);
    ++local.accepted_steps;
    local.accumulated_drift += drift;
    local.max_step_drift = std::max(local.max_step_drift, drift);
    xi /= n;
  };

  std::vector<StateVector> out;
  out.reserve(times.size());
  StateVector xi = xi0;
  double t = 0.0;
  for (double target : times) {
    if (!(target >= t)) throw DomainError("sample times must be sorted and non-negative");
    xi = ode::dormand_prince(rhs, std::move(xi), t, target, opt, renormalize);
    xi /= xi.norm();
    t = target;
    out.push_back(xi);
  }
  if (stats) *stats = local;
  return out;
}

PositionGrid::PositionGrid(Index n, double span) {
  if (n < 2) throw DimensionError("grid needs at least two points");
  if (!(span > 0.0)) throw DomainError("grid span must be positive");
  dx = span / static_cast<double>(n);
  x.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (static_cast<double>(j) - static_cast<double>(n / 2)) * dx;
}

namespace {

// Wavenumbers in FFT order; index n/2 is the Nyquist mode for even n.
double wavenumber(Index k, Index n, double span) {
  const Index signed_k = (k <= n / 2) ? k : k - n;
  return 2.0 * std::numbers::pi * static_cast<double>(signed_k) / span;
}

// F^dag diag(g(k)) F as a dense matrix in position space.
Operator fourier_multiplier(const PositionGrid& grid, const std::function<double(Index)>& g) {
  const Index n = grid.size();
  const double span = grid.dx * static_cast<double>(n);
  Operator out = Operator::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const double weight = g(k);
    if (weight == 0.0) continue;
    const double kk = wavenumber(k, n, span);
    for (Index j = 0; j < n; ++j) {
      for (Index l = 0; l < n; ++l) {
        const double phase = kk * grid.dx * static_cast<double>(j - l);
        out(j, l) += weight * std::exp(kI * phase);
      }
    }
  }
  return out / static_cast<double>(n);
}

}  // namespace

Operator spectral_momentum(const PositionGrid& grid) {
  const Index n = grid.size();
  const double span = grid.dx * static_cast<double>(n);
  const Operator p = fourier_multiplier(grid, [&](Index k) {
    if (n % 2 == 0 && k == n / 2) return 0.0;
    return wavenumber(k, n, span);
  });
  return 0.5 * (p + p.adjoint());
}

double qbm_soliton_width(double mass, double gamma, double temperature) {
  if (!(mass > 0.0) || !(gamma > 0.0) || !(temperature > 0.0)) {
    throw DomainError("mass, gamma and temperature must be positive");
  }
  return std::pow(8.0 * gamma * mass * mass * temperature, -0.25);
}

double qbm_soliton_width_si(double mass_kg, double gamma_per_s, double temperature_k) {
  return qbm_soliton_width(units::mass_to_natural(mass_kg), gamma_per_s,
                           units::temperature_to_natural(temperature_k));
}

LindbladGenerator qbm_pointer_generator(double mass, double gamma, double temperature,
                                        const PositionGrid& grid) {
  const double sigma0 = qbm_soliton_width(mass, gamma, temperature);
  const Index n = grid.size();
  const double span = grid.dx * static_cast<double>(n);
  if (n < 256) throw DomainError("pointer grid needs at least 256 points");
  if (span < 10.0 * sigma0) {
    std::ostringstream msg;
    msg << "pointer grid span " << span << " is below 10 sigma_0 = " << 10.0 * sigma0;
    throw DomainError(msg.str());
  }
  if (sigma0 < 4.0 * grid.dx) {
    std::ostringstream msg;
    msg << "pointer grid too coarse: sigma_0 = " << sigma0 << " < 4 dx = " << 4.0 * grid.dx;
    throw DomainError(msg.str());
  }
  Operator h = fourier_multiplier(grid, [&](Index k) {
    const double kk = wavenumber(k, n, span);
    return kk * kk / (2.0 * mass);
  });
  h = hermitian_part(h);
  Operator x = Operator::Zero(n, n);
  for (Index j = 0; j < n; ++j) x(j, j) = grid.x[static_cast<std::size_t>(j)];
  const double strength = std::sqrt(8.0 * std::numbers::pi / thermal_de_broglie_sq(mass, temperature));
  return LindbladGenerator(std::move(h), {{gamma, strength * x}});
}

StateVector gaussian_packet(const PositionGrid& grid, double center, double sigma,
                            double momentum) {
  if (!(sigma > 0.0)) throw DomainError("packet width must be positive");
  StateVector psi(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const double x = grid.x[static_cast<std::size_t>(j)] - center;
    psi(j) = std::exp(cplx(-x * x / (4.0 * sigma * sigma), momentum * x));
  }
  return psi / psi.norm();
}

double position_variance(const StateVector& xi, const PositionGrid& grid) {
  if (xi.size() != grid.size()) throw DimensionError("state does not match grid");
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (Index j = 0; j < grid.size(); ++j) {
    const double p = std::norm(xi(j));
    const double x = grid.x[static_cast<std::size_t>(j)];
    w += p;
    m1 += p * x;
    m2 += p * x * x;
  }
  m1 /= w;
  return m2 / w - m1 * m1;
}

}  // namespace decolab::pointer
