#include "decolab/lindblad.hpp"

#include <cmath>
#include <numbers>
#include <functional>
#include <sstream>

#include "decolab/ode.hpp"
#include "decolab/units.hpp"

namespace decolab {
namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and non-negative");
}

void check_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

Operator loss_operator(const LindbladGenerator& gen) {
  Operator k = Operator::Zero(gen.dim(), gen.dim());
  for (const auto& ch : gen.channels()) k += ch.rate * ch.op.adjoint() * ch.op;
  return k;
}

void check_leakage(const Operator& rho) {
  const double top = top_fock_population(rho, 2);
  if (top >= 1e-6) {
    std::ostringstream msg;
    msg << "Fock truncation leakage: top two levels hold population " << top;
    throw DomainError(msg.str());
  }
}

}  // namespace

LindbladGenerator::LindbladGenerator(Operator hamiltonian, std::vector<LindbladChannel> channels)
    : h_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (h_.rows() == 0 || h_.rows() != h_.cols()) {
    throw DimensionError("Hamiltonian must be a non-empty square matrix");
  }
  if (!h_.allFinite()) throw DomainError("Hamiltonian has non-finite entries");
  if (!is_hermitian(h_)) throw DomainError("Hamiltonian is not hermitian");
  for (const auto& ch : channels_) {
    if (ch.op.rows() != h_.rows() || ch.op.cols() != h_.cols()) {
      throw DimensionError("jump operator dimension differs from the Hamiltonian");
    }
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
      throw DomainError("channel rates must be finite and non-negative");
    }
    if (!ch.op.allFinite()) throw DomainError("jump operator has non-finite entries");
  }
}

std::vector<Operator> traceless_basis(Index dim) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  std::vector<Operator> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      Operator s = Operator::Zero(dim, dim);
      s(j, k) = r;
      s(k, j) = r;
      basis.push_back(s);
      Operator a = Operator::Zero(dim, dim);
      a(j, k) = -kI * r;
      a(k, j) = kI * r;
      basis.push_back(a);
    }
  }
  for (Index l = 1; l < dim; ++l) {
    Operator d = Operator::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Index j = 0; j < l; ++j) d(j, j) = norm;
    d(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(d);
  }
  return basis;
}

SuperOperator first_form_liouvillian(const FirstStandardForm& form) {
  const Index d = form.hamiltonian.rows();
  const Operator id = identity(d);
  Eigen::MatrixXcd m = -kI * (kron(id, form.hamiltonian) - kron(form.hamiltonian.transpose(), id));
  const std::size_t n = form.basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx a = form.alpha(static_cast<Index>(i), static_cast<Index>(j));
      if (a == 0.0) continue;
      const Operator& ei = form.basis[i];
      const Operator& ej = form.basis[j];
      const Operator prod = ej.adjoint() * ei;
      m += a * (kron(ej.conjugate(), ei) - 0.5 * kron(id, prod) - 0.5 * kron(prod.transpose(), id));
    }
  }
  return SuperOperator(d, std::move(m));
}

LindbladGenerator to_lindblad_form(const FirstStandardForm& form) {
  const Index d = form.hamiltonian.rows();
  const Index n = static_cast<Index>(form.basis.size());
  if (form.alpha.rows() != n || form.alpha.cols() != n) {
    throw DimensionError("coefficient matrix size must equal the basis size");
  }
  for (Index i = 0; i < n; ++i) {
    const Operator& ei = form.basis[static_cast<std::size_t>(i)];
    if (ei.rows() != d || ei.cols() != d) throw DimensionError("basis operator dimension");
    if (std::abs(ei.trace()) > 1e-10) throw DomainError("basis operators must be traceless");
    for (Index j = 0; j < n; ++j) {
      const cplx ip = (ei.adjoint() * form.basis[static_cast<std::size_t>(j)]).trace();
      if (std::abs(ip - (i == j ? 1.0 : 0.0)) > 1e-10) {
        throw DomainError("basis operators must be Hilbert-Schmidt orthonormal");
      }
    }
  }
  if (!is_hermitian(form.alpha)) throw DomainError("coefficient matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 *
                                                         (form.alpha + form.alpha.adjoint()));
  std::vector<LindbladChannel> channels;
  for (Index k = 0; k < n; ++k) {
    double gamma = solver.eigenvalues()(k);
    if (gamma < -tol::positivity) {
      std::ostringstream msg;
      msg << "coefficient matrix has eigenvalue " << gamma << "; not a CP generator";
      throw DomainError(msg.str());
    }
    if (gamma <= 0.0) continue;
    Operator l = Operator::Zero(d, d);
    for (Index i = 0; i < n; ++i) l += solver.eigenvectors()(i, k) * form.basis[static_cast<std::size_t>(i)];
    channels.push_back({gamma, std::move(l)});
  }
  return LindbladGenerator(form.hamiltonian, std::move(channels));
}

FirstStandardForm to_first_form(const LindbladGenerator& gen) {
  const LindbladGenerator shifted = make_traceless(gen);
  FirstStandardForm form;
  form.hamiltonian = shifted.hamiltonian();
  form.basis = traceless_basis(gen.dim());
  const Index n = static_cast<Index>(form.basis.size());
  form.alpha = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& ch : shifted.channels()) {
    Eigen::VectorXcd c(n);
    for (Index i = 0; i < n; ++i) {
      c(i) = (form.basis[static_cast<std::size_t>(i)].adjoint() * ch.op).trace();
    }
    form.alpha += ch.rate * c * c.adjoint();
  }
  return form;
}

SuperOperator liouvillian(const LindbladGenerator& gen) {
  const Index d = gen.dim();
  const Operator id = identity(d);
  const Operator& h = gen.hamiltonian();
  Eigen::MatrixXcd m = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& ch : gen.channels()) {
    if (ch.rate == 0.0) continue;
    const Operator ldl = ch.op.adjoint() * ch.op;
    m += ch.rate *
         (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  return SuperOperator(d, std::move(m));
}

SuperOperator dual_liouvillian(const LindbladGenerator& gen) {
  const Index d = gen.dim();
  const Operator id = identity(d);
  const Operator& h = gen.hamiltonian();
  Eigen::MatrixXcd m = kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& ch : gen.channels()) {
    if (ch.rate == 0.0) continue;
    const Operator ldl = ch.op.adjoint() * ch.op;
    m += ch.rate * (kron(ch.op.transpose(), Operator(ch.op.adjoint())) - 0.5 * kron(id, ldl) -
                    0.5 * kron(ldl.transpose(), id));
  }
  return SuperOperator(d, std::move(m));
}

Operator apply_generator(const LindbladGenerator& gen, const Operator& rho) {
  if (rho.rows() != gen.dim() || rho.cols() != gen.dim()) {
    throw DimensionError("operator does not match generator dimension");
  }
  Operator out = -kI * (gen.hamiltonian() * rho - rho * gen.hamiltonian());
  for (const auto& ch : gen.channels()) {
    const Operator lr = ch.op * rho;
    const Operator ldl = ch.op.adjoint() * ch.op;
    out += ch.rate * (lr * ch.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Operator apply_dual(const LindbladGenerator& gen, const Operator& a) {
  if (a.rows() != gen.dim() || a.cols() != gen.dim()) {
    throw DimensionError("operator does not match generator dimension");
  }
  Operator out = kI * (gen.hamiltonian() * a - a * gen.hamiltonian());
  for (const auto& ch : gen.channels()) {
    const Operator ldl = ch.op.adjoint() * ch.op;
    out += ch.rate * (ch.op.adjoint() * a * ch.op - 0.5 * (ldl * a + a * ldl));
  }
  return out;
}

LindbladGenerator gauge_shift(const LindbladGenerator& gen, const std::vector<cplx>& shifts) {
  if (shifts.size() != gen.channels().size()) {
    throw DimensionError("need one shift per channel");
  }
  const Operator id = identity(gen.dim());
  Operator h = gen.hamiltonian();
  std::vector<LindbladChannel> channels;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    const auto& ch = gen.channels()[k];
    const cplx c = shifts[k];
    h += (ch.rate / (2.0 * kI)) * (std::conj(c) * ch.op - c * Operator(ch.op.adjoint()));
    channels.push_back({ch.rate, ch.op + c * id});
  }
  h = hermitian_part(h);
  return LindbladGenerator(std::move(h), std::move(channels));
}

LindbladGenerator make_traceless(const LindbladGenerator& gen) {
  std::vector<cplx> shifts;
  for (const auto& ch : gen.channels()) {
    shifts.push_back(-ch.op.trace() / static_cast<double>(gen.dim()));
  }
  return gauge_shift(gen, shifts);
}

LindbladGenerator mix_channels(const LindbladGenerator& gen, const Operator& unitary) {
  const Index n = static_cast<Index>(gen.channels().size());
  if (unitary.rows() != n || unitary.cols() != n) {
    throw DimensionError("mixing matrix must be square with one row per channel");
  }
  if (!is_unitary(unitary)) throw DomainError("mixing matrix is not unitary");
  std::vector<LindbladChannel> channels;
  for (Index i = 0; i < n; ++i) {
    Operator l = Operator::Zero(gen.dim(), gen.dim());
    for (Index j = 0; j < n; ++j) {
      const auto& ch = gen.channels()[static_cast<std::size_t>(j)];
      l += unitary(i, j) * std::sqrt(ch.rate) * ch.op;
    }
    channels.push_back({1.0, std::move(l)});
  }
  return LindbladGenerator(gen.hamiltonian(), std::move(channels));
}

namespace {

Operator integrate_matrix(const std::function<Operator(const Operator&)>& rhs, Operator y,
                          double t, const PropagateOptions& options, bool leakage) {
  ode::Options opt;
  opt.rel_tol = options.rel_tol;
  opt.abs_tol = options.abs_tol;
  auto f = [&](double, const Operator& x) { return rhs(x); };
  auto observer = [&](double, Operator& x) {
    if (leakage) check_leakage(x);
  };
  return ode::dormand_prince(f, std::move(y), 0.0, t, opt, observer);
}

}  // namespace

DensityOperator propagate(const LindbladGenerator& gen, const DensityOperator& rho, double t,
                          const PropagateOptions& options) {
  check_time(t);
  if (rho.dim() != gen.dim()) throw DimensionError("state and generator dimensions differ");
  if (options.monitor_fock_leakage) check_leakage(rho.matrix());
  if (t == 0.0) return rho;
  Operator out;
  if (gen.dim() <= options.exponential_max_dim) {
    out = expm_apply(liouvillian(gen), rho.matrix(), t);
  } else {
    // Precomputed effective Hamiltonian; the stages are hermitian only up to
    // roundoff, so both sides are applied explicitly.
    const Operator hc = gen.hamiltonian() - 0.5 * kI * loss_operator(gen);
    const Operator hc_dag = hc.adjoint();
    auto rhs = [&](const Operator& x) {
      Operator d = -kI * (hc * x) + kI * (x * hc_dag);
      for (const auto& ch : gen.channels()) {
        if (ch.rate != 0.0) d += ch.rate * ch.op * x * ch.op.adjoint();
      }
      return d;
    };
    out = integrate_matrix(rhs, rho.matrix(), t, options, options.monitor_fock_leakage);
  }
  if (options.monitor_fock_leakage) check_leakage(out);
  out = hermitian_part(out);
  // The integrator conserves the trace only to its tolerance.
  out /= out.trace().real();
  return DensityOperator(std::move(out));
}

Operator heisenberg(const LindbladGenerator& gen, const Operator& a, double t,
                    const PropagateOptions& options) {
  check_time(t);
  if (t == 0.0) return a;
  if (gen.dim() <= options.exponential_max_dim) {
    return expm_apply(dual_liouvillian(gen), a, t);
  }
  auto rhs = [&](const Operator& x) { return apply_dual(gen, x); };
  return integrate_matrix(rhs, a, t, options, false);
}

double top_fock_population(const Operator& rho, Index levels) {
  const Index n = rho.rows();
  double sum = 0.0;
  for (Index k = std::max<Index>(0, n - levels); k < n; ++k) sum += rho(k, k).real();
  return sum;
}

LindbladGenerator dephasing_generator(const Operator& hamiltonian, double gamma) {
  return LindbladGenerator(hamiltonian, {{gamma, hamiltonian}});
}

DensityOperator dephasing_solution(const std::vector<double>& energies, double gamma,
                                   const DensityOperator& rho0, double t) {
  check_time(t);
  if (static_cast<Index>(energies.size()) != rho0.dim()) {
    throw DimensionError("need one energy per level");
  }
  Operator out = rho0.matrix();
  for (Index m = 0; m < rho0.dim(); ++m) {
    for (Index n = 0; n < rho0.dim(); ++n) {
      if (m == n) continue;
      const double w = energies[static_cast<std::size_t>(m)] - energies[static_cast<std::size_t>(n)];
      out(m, n) *= std::exp(cplx(-0.5 * gamma * w * w * t, -w * t));
    }
  }
  return DensityOperator(std::move(out));
}

Operator annihilation(Index n_max) {
  if (n_max < 1) throw DimensionError("Fock dimension must be positive");
  Operator a = Operator::Zero(n_max, n_max);
  for (Index n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator number_operator(Index n_max) {
  Operator n = Operator::Zero(n_max, n_max);
  for (Index k = 0; k < n_max; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Operator position_fock(Index n_max) {
  const Operator a = annihilation(n_max);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

Operator momentum_fock(Index n_max) {
  const Operator a = annihilation(n_max);
  return kI * (Operator(a.adjoint()) - a) / std::sqrt(2.0);
}

void check_truncation(const CoherentStateSpec& spec) {
  if (spec.n_max < 1) throw DimensionError("Fock dimension must be positive");
  if (std::norm(spec.alpha) > static_cast<double>(spec.n_max) / 4.0) {
    std::ostringstream msg;
    msg << "Fock truncation inadequate: |alpha|^2 = " << std::norm(spec.alpha)
        << " exceeds n_max/4 = " << static_cast<double>(spec.n_max) / 4.0;
    throw DomainError(msg.str());
  }
}

StateVector coherent_vector(const CoherentStateSpec& spec) {
  check_truncation(spec);
  StateVector v(spec.n_max);
  v(0) = std::exp(-0.5 * std::norm(spec.alpha));
  for (Index n = 1; n < spec.n_max; ++n) {
    v(n) = v(n - 1) * spec.alpha / std::sqrt(static_cast<double>(n));
  }
  return v / v.norm();
}

DensityOperator coherent_state(const CoherentStateSpec& spec) {
  return DensityOperator::pure(coherent_vector(spec));
}

LindbladGenerator damped_oscillator_generator(double omega, double gamma, Index n_max) {
  if (!(gamma >= 0.0)) throw DomainError("damping rate must be non-negative");
  return LindbladGenerator(omega * number_operator(n_max), {{gamma, annihilation(n_max)}});
}

cplx damped_coherent_amplitude(cplx alpha0, double omega, double gamma, double t) {
  return alpha0 * std::exp(cplx(-0.5 * gamma * t, -omega * t));
}

cplx coherent_amplitude(double mass, double omega, double x, double p) {
  check_positive(mass, "mass");
  check_positive(omega, "frequency");
  return std::sqrt(0.5 * mass * omega) * cplx(x, p / (mass * omega));
}

cplx cat_coherence_factor(cplx alpha0, cplx beta0, double gamma, double t, cplx c0) {
  check_time(t);
  const cplx exponent(-0.5 * std::norm(alpha0 - beta0), (alpha0 * std::conj(beta0)).imag());
  return c0 * std::exp(exponent * (-std::expm1(-gamma * t)));
}

double cat_decoherence_ratio(cplx alpha0, cplx beta0) { return 0.5 * std::norm(alpha0 - beta0); }

double cat_decoherence_ratio_si(double mass_kg, double omega, double displacement_m) {
  if (!(mass_kg > 0.0) || !(omega > 0.0) || !std::isfinite(displacement_m)) {
    throw DomainError("pendulum needs positive mass and frequency and a finite displacement");
  }
  const cplx alpha = coherent_amplitude(units::mass_to_natural(mass_kg), omega, displacement_m, 0.0);
  return cat_decoherence_ratio(alpha, -alpha);
}

double fit_initial_decay_rate(const std::vector<double>& times, const std::vector<cplx>& values) {
  if (times.size() != values.size()) throw DimensionError("times and values differ in length");
  if (times.size() < 3) throw DomainError("decay fit needs at least three samples");
  // log|c(t)| = b0 + b1 t + b2 t^2 by least squares; the rate is -b1.
  // Times are scaled to O(1) first so tiny windows stay well conditioned.
  double scale = 0.0;
  for (double t : times) scale = std::max(scale, std::abs(t));
  if (!(scale > 0.0)) throw DomainError("decay fit needs distinct sample times");
  Eigen::MatrixXd design(static_cast<Index>(times.size()), 3);
  Eigen::VectorXd rhs(static_cast<Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double mag = std::abs(values[i]);
    if (!(mag > 0.0) || !std::isfinite(times[i])) throw DomainError("decay fit needs finite times and non-zero values");
    const auto r = static_cast<Index>(i);
    design(r, 0) = 1.0;
    const double u = times[i] / scale;
    design(r, 1) = u;
    design(r, 2) = u * u;
    rhs(r) = std::log(mag);
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(rhs);
  return -beta(1) / scale;
}

DensityOperator cat_state(cplx alpha, cplx beta, Index n_max) {
  const StateVector sum = coherent_vector({alpha, n_max}) + coherent_vector({beta, n_max});
  return DensityOperator::pure(sum);
}

cplx extract_cat_coherence(const Operator& rho, const StateVector& a, const StateVector& b) {
  const cplx s = a.dot(b);  // <a|b>
  const double s2 = std::norm(s);
  if (s2 > 1.0 - 1e-12) throw DomainError("cat branches are not distinguishable");
  const double paa = a.dot(rho * a).real();
  const double pbb = b.dot(rho * b).real();
  const double norm = (2.0 - paa - pbb) / (2.0 * (1.0 - s2));
  const cplx y = a.dot(rho * b) / norm - 2.0 * s;
  return (y - s * s * std::conj(y)) / (1.0 - s2 * s2);
}

double thermal_momentum(double mass, double temperature) {
  check_positive(mass, "mass");
  check_positive(temperature, "temperature");
  return 2.0 * std::sqrt(mass * temperature);
}

LindbladGenerator qbm_generator(double mass, double gamma, double temperature, Index n_max) {
  const double pth = thermal_momentum(mass, temperature);
  const Operator x = position_fock(n_max);
  const Operator p = momentum_fock(n_max);
  Operator h = p * p / (2.0 * mass) + 0.5 * gamma * (x * p + p * x);
  h = hermitian_part(h);
  return LindbladGenerator(std::move(h), {{gamma, pth * x + kI * p / pth}});
}

QbmMoments qbm_moments(double mass, double gamma, double temperature, const QbmMoments& initial,
                       double t, double potential_curvature) {
  if (potential_curvature != 0.0) {
    throw DomainError("closed-form moments are available for V = 0 only");
  }
  check_time(t);
  check_positive(gamma, "gamma");
  const double pth = thermal_momentum(mass, temperature);
  const double e2 = std::exp(-2.0 * gamma * t);
  const double e4 = e2 * e2;

  QbmMoments out;
  out.mean_p = e2 * initial.mean_p;
  out.mean_x = initial.mean_x - initial.mean_p * std::expm1(-2.0 * gamma * t) / (2.0 * gamma * mass);

  // var_p' = -4 gamma var_p + gamma p_th^2
  const double a = 0.25 * pth * pth;
  const double b = initial.var_p - a;
  out.var_p = a + b * e4;
  // C = <{dx,dp}>, C' = 2 var_p / m - 2 gamma C
  const double c0 = 2.0 * initial.cov_xp;
  const double d = c0 - a / (mass * gamma) + b / (mass * gamma);
  const double c = a / (mass * gamma) - b / (mass * gamma) * e4 + d * e2;
  out.cov_xp = 0.5 * c;
  // var_x' = C / m + gamma / p_th^2
  const double one_minus_e4 = -std::expm1(-4.0 * gamma * t);
  const double one_minus_e2 = -std::expm1(-2.0 * gamma * t);
  out.var_x = initial.var_x + (a / (mass * mass * gamma) + gamma / (pth * pth)) * t -
              b / (mass * mass * gamma) * one_minus_e4 / (4.0 * gamma) +
              d / mass * one_minus_e2 / (2.0 * gamma);
  return out;
}

double qbm_position_spread_rate(double mass, double gamma, double temperature) {
  check_positive(gamma, "gamma");
  return temperature / (mass * gamma) + gamma / (4.0 * mass * temperature);
}

cplx qbm_evolved_commutator(double gamma, double t) {
  check_time(t);
  return kI * std::exp(-2.0 * gamma * t);
}

double thermal_de_broglie_sq(double mass, double temperature) {
  check_positive(mass, "mass");
  check_positive(temperature, "temperature");
  return 2.0 * std::numbers::pi / (mass * temperature);
}

double qbm_coherence_ratio(double x, double x_prime, double temperature, double mass) {
  const double dx = x - x_prime;
  return 4.0 * std::numbers::pi * dx * dx / thermal_de_broglie_sq(mass, temperature);
}

double qbm_coherence_decay(double x, double x_prime, double temperature, double mass,
                           double gamma, double t) {
  check_time(t);
  return std::exp(-qbm_coherence_ratio(x, x_prime, temperature, mass) * gamma * t);
}

}  // namespace decolab
