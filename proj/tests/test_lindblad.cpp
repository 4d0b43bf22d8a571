#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decolab/lindblad.hpp"
#include "helpers.hpp"

using namespace decolab;
using namespace decolab::testing;

namespace {

LindbladGenerator random_generator(Random& rng, Index dim, int channels) {
  std::vector<LindbladChannel> ch;
  for (int k = 0; k < channels; ++k) ch.push_back({rng.uniform(0.1, 1.0), rng.ginibre(dim)});
  return LindbladGenerator(rng.hermitian(dim), std::move(ch));
}

double expectation(const Operator& a, const Operator& rho) { return (a * rho).trace().real(); }

// Moments of rho in the Fock representation of x and p.
QbmMoments fock_moments(const Operator& rho, Index n) {
  const Operator x = position_fock(n), p = momentum_fock(n);
  QbmMoments m;
  m.mean_x = expectation(x, rho);
  m.mean_p = expectation(p, rho);
  m.var_x = expectation(x * x, rho) - m.mean_x * m.mean_x;
  m.var_p = expectation(p * p, rho) - m.mean_p * m.mean_p;
  m.cov_xp = 0.5 * expectation(x * p + p * x, rho) - m.mean_x * m.mean_p;
  return m;
}

}  // namespace

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(LindbladGenerator(pauli_y() * kI, {}), DomainError);
  CHECK_THROWS_AS(LindbladGenerator(pauli_z(), {{-0.1, pauli_x()}}), DomainError);
  CHECK_THROWS_AS(LindbladGenerator(pauli_z(), {{0.1, Operator::Identity(3, 3)}}), DimensionError);
}

TEST_CASE("to_lindblad_form") {
  const auto basis = traceless_basis(2);
  CHECK(basis.size() == 3);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(std::abs(basis[i].trace()) < 1e-15);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx ip = (basis[i].adjoint() * basis[j]).trace();
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-14);
    }
  }

  FirstStandardForm diag{pauli_z(), traceless_basis(2), Eigen::MatrixXcd::Zero(3, 3)};
  diag.alpha(0, 0) = 0.3;
  diag.alpha(2, 2) = 0.7;
  const auto g = to_lindblad_form(diag);
  CHECK(g.channels().size() == 2);
  CHECK((liouvillian(g).matrix() - first_form_liouvillian(diag).matrix()).norm() < 1e-12);

  // alpha = [[1,1],[1,1]] over (sigma_x, sigma_y)/sqrt 2: one channel, rate 2.
  FirstStandardForm pair{Operator::Zero(2, 2), {pauli_x() / std::sqrt(2.0), pauli_y() / std::sqrt(2.0)},
                         Eigen::MatrixXcd::Ones(2, 2)};
  const auto single = to_lindblad_form(pair);
  REQUIRE(single.channels().size() == 1);
  CHECK(single.channels()[0].rate == doctest::Approx(2.0));
  const Operator expected = (pauli_x() + pauli_y()) / 2.0;
  const Operator& l = single.channels()[0].op;
  const cplx phase = (expected.adjoint() * l).trace() / (expected.adjoint() * expected).trace();
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK((l - phase * expected).norm() < 1e-12);

  FirstStandardForm bad = pair;
  bad.alpha(0, 1) = bad.alpha(1, 0) = 2.0;
  CHECK_THROWS_AS(to_lindblad_form(bad), DomainError);
}

TEST_CASE("first form round trip") {
  Random rng(31);
  for (Index d : {2, 3, 4}) {
    const auto gen = random_generator(rng, d, 2);
    const auto form = to_first_form(gen);
    const auto back = to_lindblad_form(form);
    CHECK((liouvillian(back).matrix() - liouvillian(gen).matrix()).norm() < 1e-10);
    for (int i = 0; i < 20; ++i) {
      const Operator rho = rng.density(d).matrix();
      CHECK((first_form_liouvillian(form).apply(rho) - apply_generator(gen, rho)).norm() < 1e-9);
    }
  }
}

TEST_CASE("Liouvillian structure") {
  const LindbladGenerator empty(Operator::Zero(3, 3), {});
  CHECK(liouvillian(empty).matrix().norm() == 0.0);

  const double delta = 1.3, gamma = 0.4;
  const LindbladGenerator deph(0.5 * delta * pauli_z(), {{gamma, pauli_z()}});
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(liouvillian(deph).matrix());
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  CHECK(std::abs(ev[0]) < 1e-14);
  CHECK(std::abs(ev[1]) < 1e-14);
  CHECK(std::abs(ev[2] - cplx(-2.0 * gamma, -delta)) < 1e-12);
  CHECK(std::abs(ev[3] - cplx(-2.0 * gamma, delta)) < 1e-12);

  Random rng(32);
  const auto gen = random_generator(rng, 3, 2);
  const auto lv = liouvillian(gen);
  const auto dual = dual_liouvillian(gen);
  CHECK(dual.apply(Operator::Identity(3, 3)).norm() < 1e-12);
  for (int i = 0; i < 20; ++i) {
    const Operator rho = rng.density(3).matrix();
    const Operator a = rng.ginibre(3);
    const Operator lr = lv.apply(rho);
    CHECK(std::abs(lr.trace()) < 1e-12);
    CHECK(is_hermitian(lr, 1e-12));
    CHECK(std::abs((a * lr).trace() - (rho * dual.apply(a)).trace()) < 1e-10);
  }

  const Operator h = rng.hermitian(3);
  const LindbladGenerator unitary(h, {});
  const Operator a = rng.hermitian(3);
  CHECK((apply_dual(unitary, a) - kI * commutator(h, a)).norm() < 1e-12);
  const Operator at = heisenberg(unitary, a, 0.8);
  CHECK(at.norm() == doctest::Approx(a.norm()).epsilon(1e-10));
}

TEST_CASE("gauge transformations leave the Liouvillian invariant") {
  Random rng(33);
  const auto gen = random_generator(rng, 3, 2);
  CHECK((liouvillian(gauge_shift(gen, {0.0, 0.0})).matrix() - liouvillian(gen).matrix()).norm() == 0.0);
  const auto shifted = gauge_shift(gen, {cplx(0.4, -0.2), cplx(-1.0, 0.5)});
  CHECK((liouvillian(shifted).matrix() - liouvillian(gen).matrix()).norm() < 1e-10);
  CHECK((shifted.hamiltonian() - gen.hamiltonian()).norm() > 1e-3);

  const auto osc = damped_oscillator_generator(1.0, 0.3, 8);
  const auto osc_shift = gauge_shift(osc, {1.0});
  CHECK((liouvillian(osc_shift).matrix() - liouvillian(osc).matrix()).norm() < 1e-10);
  CHECK((osc_shift.channels()[0].op - osc.channels()[0].op).norm() > 0.5);

  const auto traceless = make_traceless(gen);
  for (const auto& ch : traceless.channels()) CHECK(std::abs(ch.op.trace()) < 1e-12);
  CHECK((liouvillian(traceless).matrix() - liouvillian(gen).matrix()).norm() < 1e-10);

  const auto mixed = mix_channels(gen, rng.unitary(2));
  CHECK((liouvillian(mixed).matrix() - liouvillian(gen).matrix()).norm() < 1e-10);
  CHECK_THROWS_AS(gauge_shift(gen, {1.0}), DimensionError);
}

TEST_CASE("propagation preserves trace, hermiticity and positivity") {
  Random rng(34);
  for (int i = 0; i < 20; ++i) {
    const Index d = 2 + i % 4;
    const auto gen = random_generator(rng, d, 1 + i % 3);
    const auto rho = rng.density(d);
    for (double t : {0.1, 1.0, 10.0}) {
      const auto out = propagate(gen, rho, t);
      CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-9);
      CHECK(is_hermitian(out.matrix(), 1e-10));
      CHECK(min_eigenvalue(out.matrix()) >= -1e-7);
    }
    const auto once = propagate(gen, rho, 1.1);
    const auto twice = propagate(gen, propagate(gen, rho, 0.5), 0.6);
    CHECK(trace_distance(once, twice) < 1e-9);
  }
}

TEST_CASE("Heisenberg and Schroedinger pictures agree") {
  Random rng(35);
  for (int i = 0; i < 5; ++i) {
    const auto gen = random_generator(rng, 3, 2);
    const auto rho = rng.density(3);
    const Operator a = rng.hermitian(3);
    const double t = 0.7;
    const cplx lhs = (a * propagate(gen, rho, t).matrix()).trace();
    const cplx rhs = (rho.matrix() * heisenberg(gen, a, t)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("Runge-Kutta and exponential propagation agree") {
  Random rng(36);
  const auto gen = random_generator(rng, 6, 2);
  const auto rho = rng.density(6);
  PropagateOptions rk;
  rk.exponential_max_dim = 2;
  CHECK(trace_distance(propagate(gen, rho, 1.3), propagate(gen, rho, 1.3, rk)) < 1e-8);

  // Above the default exponential limit: the Runge-Kutta path is the default.
  const auto big = random_generator(rng, 14, 2);
  const auto rho14 = rng.density(14);
  PropagateOptions exact;
  exact.exponential_max_dim = 14;
  const auto a = propagate(big, rho14, 0.9);
  CHECK(trace_distance(a, propagate(big, rho14, 0.9, exact)) < 1e-8);
  CHECK(min_eigenvalue(a.matrix()) > -1e-10);
}

TEST_CASE("pure dephasing closed form") {
  DensityOperator rho0(Operator::Constant(2, 2, 0.5));
  const auto out = dephasing_solution({0.0, 1.0}, 1.0, rho0, 1.0);
  CHECK(std::abs(out(0, 1) - 0.5 * std::exp(cplx(-0.5, 1.0))) < 1e-15);
  CHECK(std::abs(out(0, 0) - 0.5) < 1e-15);

  Random rng(37);
  for (Index d : {4, 5}) {
    std::vector<double> e;
    Operator h = Operator::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
      e.push_back(rng.uniform(-1.0, 1.0));
      h(k, k) = e.back();
    }
    const auto rho = rng.density(d);
    const auto closed = dephasing_solution(e, 0.6, rho, 2.1);
    const auto numeric = propagate(dephasing_generator(h, 0.6), rho, 2.1);
    CHECK((closed.matrix() - numeric.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    for (Index k = 0; k < d; ++k) CHECK(closed(k, k) == rho(k, k));
  }
}

TEST_CASE("coherent states and truncation") {
  CHECK_THROWS_AS(check_truncation({cplx(3.0, 0.0), 30}), DomainError);
  CHECK_NOTHROW(check_truncation({cplx(2.0, 0.0), 16}));
  const StateVector v = coherent_vector({cplx(1.0, 0.5), 30});
  const Operator a = annihilation(30);
  CHECK((a * v - cplx(1.0, 0.5) * v).head(25).norm() < 1e-8);
  CHECK(coherent_amplitude(2.0, 0.5, 1.0, 0.0) == cplx(std::sqrt(0.5), 0.0));
}

TEST_CASE("damped oscillator keeps coherent states coherent") {
  const double omega = 1.0, gamma = 0.5;
  const Index n = 30;
  const auto gen = damped_oscillator_generator(omega, gamma, n);
  const Operator h = omega * number_operator(n);
  const auto rho0 = coherent_state({cplx(1.0, 0.0), n});
  const double e0 = expectation(h, rho0.matrix());
  PropagateOptions opt;
  opt.monitor_fock_leakage = true;
  for (double gt : {0.25, 0.5, 1.0}) {
    const double t = gt / gamma;
    const auto rho = propagate(gen, rho0, t, opt);
    CHECK(expectation(h, rho.matrix()) == doctest::Approx(std::exp(-gamma * t) * e0).epsilon(1e-4));
    CHECK(std::abs(rho.purity() - 1.0) < 1e-3);
    const auto target = coherent_state({damped_coherent_amplitude(1.0, omega, gamma, t), n});
    CHECK(fidelity(rho, target) >= 0.999);
  }
  const auto vac = coherent_state({0.0, n});
  CHECK(trace_distance(propagate(gen, vac, 3.0), vac) < 1e-10);
}

TEST_CASE("leakage monitor fires on an inadequate truncation") {
  const Index n = 6;
  const LindbladGenerator pump(number_operator(n), {{1.0, annihilation(n).adjoint()}});
  PropagateOptions opt;
  opt.monitor_fock_leakage = true;
  CHECK_THROWS_AS(propagate(pump, coherent_state({0.0, n}), 2.0, opt), DomainError);
}

TEST_CASE("cat coherence factor") {
  CHECK(cat_coherence_factor(1.0, 1.0, 0.7, 3.0, 0.4) == cplx(0.4));
  const cplx a0(2.0, 0.0), b0(-2.0, 0.0);
  double previous = 1.0;
  for (double t = 0.0; t < 3.0; t += 0.1) {
    const double c = std::abs(cat_coherence_factor(a0, b0, 1.0, t));
    CHECK(c <= previous);
    previous = c;
  }
  CHECK(cat_decoherence_ratio(a0, b0) == 8.0);
}

TEST_CASE("cat coherence under the truncated Fock integrator") {
  const cplx a0(2.0, 0.0), b0(-2.0, 0.0);
  const double omega = 1.0, gamma = 1.0;
  const Index n = 60;
  const auto gen = damped_oscillator_generator(omega, gamma, n);
  const auto rho0 = cat_state(a0, b0, n);
  for (double t : {0.05, 0.1, 0.2}) {
    const auto rho = propagate(gen, rho0, t);
    const auto a = coherent_vector({damped_coherent_amplitude(a0, omega, gamma, t), n});
    const auto b = coherent_vector({damped_coherent_amplitude(b0, omega, gamma, t), n});
    const cplx c = extract_cat_coherence(rho.matrix(), a, b);
    CHECK(std::abs(c - cat_coherence_factor(a0, b0, gamma, t)) < 1e-3);
  }
}

TEST_CASE("QBM moments") {
  const double m = 1.0, gamma = 0.1, temperature = 2.0;
  QbmMoments init;
  init.mean_x = 0.3;
  init.mean_p = 1.5;
  init.var_x = 0.5;
  init.var_p = 0.5;
  const auto zero = qbm_moments(m, gamma, temperature, init, 0.0);
  CHECK(zero.var_x == init.var_x);
  CHECK(zero.mean_p == init.mean_p);
  const auto late = qbm_moments(m, gamma, temperature, init, 10.0 / gamma);
  CHECK(late.kinetic_energy(m) == doctest::Approx(temperature / 2.0).epsilon(1e-3));
  const auto half = qbm_moments(m, gamma, temperature, init, 0.5 / gamma);
  CHECK(half.mean_p == doctest::Approx(std::exp(-1.0) * init.mean_p).epsilon(1e-14));
  CHECK(half.mean_x == doctest::Approx(init.mean_x + (init.mean_p - half.mean_p) / (2.0 * gamma * m)));
  const double t1 = 50.0 / gamma, t2 = 60.0 / gamma;
  const double slope = (qbm_moments(m, gamma, temperature, init, t2).var_x -
                        qbm_moments(m, gamma, temperature, init, t1).var_x) / (t2 - t1);
  CHECK(slope == doctest::Approx(qbm_position_spread_rate(m, gamma, temperature)).epsilon(1e-12));
  CHECK(slope == doctest::Approx(temperature / (m * gamma)).epsilon(0.05));
  CHECK_THROWS_AS(qbm_moments(m, gamma, temperature, init, 1.0, 0.5), DomainError);
}

TEST_CASE("QBM closed-form moments match Fock-space propagation") {
  const double m = 1.0, gamma = 0.1, temperature = 0.05;
  const Index n = 40;
  const auto gen = qbm_generator(m, gamma, temperature, n);
  const auto rho0 = coherent_state({cplx(0.3, 0.2), n});
  const auto init = fock_moments(rho0.matrix(), n);
  PropagateOptions opt;
  opt.monitor_fock_leakage = true;
  for (double t : {0.25, 0.5, 1.0}) {
    const auto num = fock_moments(propagate(gen, rho0, t, opt).matrix(), n);
    const auto ref = qbm_moments(m, gamma, temperature, init, t);
    CHECK(num.mean_x == doctest::Approx(ref.mean_x).epsilon(1e-6));
    CHECK(num.mean_p == doctest::Approx(ref.mean_p).epsilon(1e-6));
    CHECK(num.var_x == doctest::Approx(ref.var_x).epsilon(1e-6));
    CHECK(num.var_p == doctest::Approx(ref.var_p).epsilon(1e-6));
    CHECK(num.cov_xp == doctest::Approx(ref.cov_xp).epsilon(1e-6));
  }
}

TEST_CASE("QBM dual generator gives the frictional equations of motion") {
  const double m = 1.7, gamma = 0.3, temperature = 0.8;
  const Index n = 20;
  const auto gen = qbm_generator(m, gamma, temperature, n);
  const Operator x = position_fock(n), p = momentum_fock(n);
  const Index k = n - 3;  // truncation only touches the last rows and columns
  CHECK((apply_dual(gen, x) - p / m).topLeftCorner(k, k).norm() < 1e-12);
  CHECK((apply_dual(gen, p) + 2.0 * gamma * p).topLeftCorner(k, k).norm() < 1e-12);
  CHECK(std::abs(qbm_evolved_commutator(gamma, 0.0) - kI) < 1e-15);
  CHECK(std::abs(qbm_evolved_commutator(gamma, 1.0) - kI * std::exp(-2.0 * gamma)) < 1e-15);
}

TEST_CASE("QBM coherence ratio") {
  const double m = 2.0, temperature = 0.3;
  CHECK(qbm_coherence_ratio(1.0, 1.0, temperature, m) == 0.0);
  const double r1 = qbm_coherence_ratio(0.0, 0.5, temperature, m);
  CHECK(qbm_coherence_ratio(0.0, 1.0, temperature, m) == doctest::Approx(4.0 * r1).epsilon(1e-15));
  CHECK(r1 * thermal_de_broglie_sq(m, temperature) / (4.0 * std::numbers::pi) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(qbm_coherence_decay(0.0, 0.5, temperature, m, 0.2, 3.0) == doctest::Approx(std::exp(-r1 * 0.6)));
}

TEST_CASE("initial decay rate fit") {
  std::vector<double> t;
  std::vector<cplx> c;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.01 * i);
    c.push_back(std::polar(2.0 * std::exp(-3.0 * t.back() + 4.0 * t.back() * t.back()), 0.7 * i));
  }
  CHECK(fit_initial_decay_rate(t, c) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(fit_initial_decay_rate({0.0, 1.0}, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(fit_initial_decay_rate({0.0, 1.0, 2.0}, {1.0, 0.0, 0.5}), DomainError);
}

TEST_CASE("pendulum cat ratio") {
  // m omega x^2 / hbar for the +-x superposition.
  const double expected = 0.1 * 2.0 * std::numbers::pi * 1e-4 / 1.054571817e-34;
  CHECK(cat_decoherence_ratio_si(0.1, 2.0 * std::numbers::pi, 0.01) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(cat_decoherence_ratio_si(-0.1, 1.0, 0.01), DomainError);
}
