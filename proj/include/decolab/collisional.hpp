#pragma once

// Collisional decoherence by a thermal gas: Maxwell speeds, localization
// and momentum-gain rates of a heavy particle, and the rate tensor, energy
// shifts and master equation of a particle with internal channels.

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "decolab/core.hpp"
#include "decolab/lindblad.hpp"

namespace decolab::collisional {

struct GasModel {
  double n_gas = 1.0;
  double mass = 1.0;
  double temperature = 1.0;

  GasModel() = default;
  GasModel(double n_gas, double mass, double temperature);

  /// sqrt(2T/m), the most probable speed.
  double thermal_speed() const;
  /// sqrt(8T/(pi m)).
  double mean_speed() const;
};

/// Isotropic scattering amplitude f(cos theta; E), E the incoming kinetic energy.
using Amplitude = std::function<cplx(double cos_theta, double energy)>;

Amplitude constant_amplitude(cplx f0);

/// Hard-sphere partial-wave sum for radius R and gas mass m, truncated once
/// the remaining partial waves contribute less than 1e-8.
Amplitude hard_sphere_amplitude(double radius, double mass);

/// 4 pi (m / 2 pi T)^(3/2) v^2 exp(-m v^2 / 2T).
double maxwell_speed_pdf(const GasModel& gas, double v);

/// sigma(E) = 2 pi int |f|^2 dcos(theta).
double cross_section(const Amplitude& f, double energy);

/// F_inf = <sigma v n_gas>, the total collision rate.
double total_collision_rate(const Amplitude& f, const GasModel& gas);

/// Localization rate of a heavy particle for separation x:
/// int dv nu(v) n v 2 pi int dcos |f|^2 (1 - sinc(2 sin(theta/2) m v x)).
double localization_rate(const Amplitude& f, const GasModel& gas, double x);

/// Momentum-gain rate M_in(Q) for momentum transfer of magnitude Q, with the
/// energy-shell delta eliminated analytically:
/// (2 pi n / (m Q)) int_{Q/2}^inf p mu(p) |f(1 - Q^2/2p^2; p^2/2m)|^2 dp.
/// Returns +infinity at Q = 0 (integrable 1/Q singularity).
double momentum_gain_rate(const Amplitude& f, const GasModel& gas, double q);
std::vector<double> momentum_gain_rate(const Amplitude& f, const GasModel& gas,
                                       std::span<const double> q_grid);

/// Largest momentum transfer carrying weight inside the thermal window.
double momentum_transfer_cutoff(const GasModel& gas);

/// int d^3Q M_in(Q) (expected to equal F_inf).
double momentum_gain_total(const Amplitude& f, const GasModel& gas);

/// int d^3Q (1 - sinc(Q x)) M_in(Q) (expected to equal F(x)).
double localization_rate_from_gain(const Amplitude& f, const GasModel& gas, double x);

/// Internal channels: energies E_alpha and amplitudes f_{alpha alpha0} keyed
/// by (alpha, alpha0); missing pairs scatter with zero amplitude.
struct ChannelSpec {
  std::vector<double> energies;
  std::map<std::pair<std::size_t, std::size_t>, Amplitude> amplitudes;

  std::size_t size() const noexcept { return energies.size(); }
};

/// M_{alpha beta}^{alpha0 beta0} stored as matrix(alpha*N + alpha0, beta*N + beta0),
/// plus the energy shifts eps_alpha and the bare channel energies.
struct RateTensor {
  std::size_t n = 0;
  Eigen::MatrixXcd matrix;
  std::vector<double> energies;
  std::vector<double> shifts;

  cplx operator()(std::size_t alpha, std::size_t beta, std::size_t alpha0,
                  std::size_t beta0) const {
    return matrix(static_cast<Index>(alpha * n + alpha0), static_cast<Index>(beta * n + beta0));
  }
};

/// chi * int dv nu(v) n v_out 2 pi int dcos f_{alpha alpha0} f*_{beta beta0} with
/// v_out = sqrt(v^2 - 2(E_alpha - E_alpha0)/m), zero below threshold, and chi = 1
/// only for equal energy transfers.
RateTensor dot_rate_tensor(const ChannelSpec& spec, const GasModel& gas);

/// pi int dv nu(v) n v int dcos |f_aa - f_bb|^2.
double elastic_dephasing_rate(const Amplitude& f_aa, const Amplitude& f_bb, const GasModel& gas);

/// eps_alpha = -2 pi (n/m) int dv nu(v) Re f_{alpha alpha}(1; m v^2 / 2).
std::vector<double> energy_shifts(const ChannelSpec& spec, const GasModel& gas);

/// -i[sum (E_a + eps_a)|a><a|, rho] + sum M |a><a0| rho |b0><b| - 1/2 {K, rho}
/// with K_{a a0} = sum_g M_{gg}^{a0 a}.
Operator dot_master_rhs(const Operator& rho, const RateTensor& tensor);
Operator dot_master_rhs(const DensityOperator& rho, const ChannelSpec& spec, const GasModel& gas);

/// The same map as a superoperator, for exact propagation with expm_apply.
SuperOperator dot_liouvillian(const RateTensor& tensor);

}  // namespace decolab::collisional
