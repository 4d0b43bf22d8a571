#include <doctest.h>

#include <cmath>

#include "decolab/pointer_states.hpp"
#include "decolab/units.hpp"
#include "helpers.hpp"

using namespace decolab;
using namespace decolab::pointer;

namespace {

LindbladGenerator random_generator(testing::Random& rng, Index dim, int channels) {
  std::vector<LindbladChannel> chans;
  for (int k = 0; k < channels; ++k) chans.push_back({rng.uniform() + 0.1, rng.ginibre(dim)});
  return LindbladGenerator(rng.hermitian(dim), std::move(chans));
}

double overlap_sq(const StateVector& a, const StateVector& b) { return std::norm(a.dot(b)); }

}  // namespace

TEST_CASE("linear entropy rate") {
  testing::Random rng(71);
  const LindbladGenerator unitary(rng.hermitian(3), {});
  CHECK(std::abs(linear_entropy_rate(rng.density(3), unitary)) < 1e-12);

  const double gamma = 0.7;
  const LindbladGenerator dephase(Operator::Zero(2, 2), {{gamma, testing::pauli_z()}});
  CHECK(linear_entropy_rate(DensityOperator(projector(testing::basis_state(2, 0))), dephase) == 0.0);
  // L(|+><+|) = gamma (Z P Z - P) = -gamma sigma_x, so -2 tr(P L(P)) = 2 gamma.
  CHECK(linear_entropy_rate(DensityOperator(projector(testing::plus_state())), dephase) ==
        doctest::Approx(2.0 * gamma).epsilon(1e-12));

  const auto osc = damped_oscillator_generator(1.0, 0.2, 40);
  const double coherent = linear_entropy_rate(coherent_state({2.0, 40}), osc);
  const double cat = linear_entropy_rate(cat_state(2.0, -2.0, 40), osc);
  CHECK(coherent >= 0.0);
  CHECK(coherent < 1e-6);
  CHECK(cat > 1.0);
}

TEST_CASE("sieve ordering is basis independent") {
  testing::Random rng(72);
  for (int i = 0; i < 10; ++i) {
    const auto gen = random_generator(rng, 4, 2);
    const auto rho = rng.density(4);
    const Operator u = rng.unitary(4);
    std::vector<LindbladChannel> rotated;
    for (const auto& ch : gen.channels()) rotated.push_back({ch.rate, u * ch.op * u.adjoint()});
    const LindbladGenerator gen_u(u * gen.hamiltonian() * u.adjoint(), rotated);
    const DensityOperator rho_u(hermitian_part(u * rho.matrix() * u.adjoint()));
    CHECK(linear_entropy_rate(rho_u, gen_u) == doctest::Approx(linear_entropy_rate(rho, gen)).epsilon(1e-10));
  }
}

TEST_CASE("vector and projector forms agree") {
  testing::Random rng(73);
  for (int i = 0; i < 20; ++i) {
    const Index dim = 2 + i % 4;
    const auto gen = random_generator(rng, dim, 1 + i % 3);
    const StateVector xi = rng.state(dim);
    const StateVector d = nonlinear_rhs(xi, gen);
    CHECK(std::abs(xi.dot(d).real()) < 1e-10);
    const Operator dp = d * xi.adjoint() + xi * d.adjoint();
    CHECK((dp - projector_rhs(xi, gen)).norm() < 1e-9);
  }
}

TEST_CASE("nonlinear rhs special cases") {
  testing::Random rng(74);
  const Operator h = rng.hermitian(3);
  const StateVector xi = rng.state(3);
  CHECK((nonlinear_rhs(xi, LindbladGenerator(h, {})) + kI * (h * xi)).norm() < 1e-14);

  // Dephasing leaves |0> on its own ray.
  const LindbladGenerator dephase(Operator::Zero(2, 2), {{0.5, testing::pauli_z()}});
  const StateVector zero = testing::basis_state(2, 0);
  const StateVector d = nonlinear_rhs(zero, dephase);
  CHECK((d - zero.dot(d) * zero).norm() < 1e-14);

  // Coherent states: only the number-operator bracket survives.
  const Index n = 40;
  const double gamma = 0.3;
  const auto osc = damped_oscillator_generator(0.0, gamma, n);
  const StateVector alpha = coherent_vector({cplx(1.5, 0.5), n});
  const Operator num = number_operator(n);
  const double mean_n = alpha.dot(num * alpha).real();
  const StateVector expected = -0.5 * gamma * (num * alpha - mean_n * alpha);
  CHECK((nonlinear_rhs(alpha, osc) - expected).norm() < 1e-6);
}

TEST_CASE("damped oscillator flow keeps coherent states") {
  const Index n = 40;
  const double omega = 1.0, gamma = 0.5;
  const cplx alpha0 = 1.5;
  const auto gen = damped_oscillator_generator(omega, gamma, n);
  std::vector<double> times;
  for (int i = 1; i <= 8; ++i) times.push_back(0.25 * i / gamma);
  FlowStats stats;
  const auto path = evolve_robust(coherent_vector({alpha0, n}), gen, times, {}, &stats);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto target = coherent_vector({damped_coherent_amplitude(alpha0, omega, gamma, times[i]), n});
    CHECK(overlap_sq(path[i], target) >= 0.999);
    CHECK(std::abs(path[i].norm() - 1.0) < 1e-12);
  }
  CHECK(stats.accepted_steps > 0);
  CHECK(stats.accumulated_drift <= 1e-9 * times.back());
}

TEST_CASE("zero rate gives unitary flow") {
  testing::Random rng(75);
  const Operator h = rng.hermitian(4);
  const StateVector xi = rng.state(4);
  const auto path = evolve_robust(xi, LindbladGenerator(h, {{0.0, rng.ginibre(4)}}), {1.3});
  const StateVector exact = expm(-kI * 1.3 * h) * xi;
  CHECK(overlap_sq(path[0], exact) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("flow argument checks") {
  const LindbladGenerator dephase(Operator::Zero(2, 2), {{0.5, testing::pauli_z()}});
  CHECK_THROWS_AS(evolve_robust(StateVector::Ones(2), dephase, {1.0}), DomainError);
  CHECK_THROWS_AS(evolve_robust(testing::basis_state(2, 0), dephase, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(nonlinear_rhs(testing::basis_state(3, 0), dephase), DimensionError);
}

TEST_CASE("soliton width formula") {
  CHECK(qbm_soliton_width(1.0, 0.125, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(qbm_soliton_width(2.0, 16.0 * 0.3, 0.5) / qbm_soliton_width(2.0, 0.3, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const double gamma = 1.0 / (13.7e9 * units::seconds_per_year);
  CHECK(qbm_soliton_width_si(1e-8, gamma, 2.7) == doctest::Approx(2.0e-12).epsilon(0.15));
  CHECK_THROWS_AS(qbm_soliton_width(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("pointer grid validation") {
  CHECK_THROWS_AS(qbm_pointer_generator(1.0, 0.125, 1.0, PositionGrid(128, 32.0)), DomainError);
  CHECK_THROWS_AS(qbm_pointer_generator(1.0, 0.125, 1.0, PositionGrid(256, 8.0)), DomainError);
  CHECK_THROWS_AS(qbm_pointer_generator(1.0, 0.125, 1.0, PositionGrid(256, 2048.0)), DomainError);
  const PositionGrid grid(256, 32.0);
  const Operator p = spectral_momentum(grid);
  CHECK(is_hermitian(p, 1e-12));
  const StateVector g = gaussian_packet(grid, 0.0, 1.0, 0.7);
  CHECK(g.dot(p * g).real() == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(position_variance(gaussian_packet(grid, 1.0, 1.3), grid) == doctest::Approx(1.69).epsilon(1e-8));
}

TEST_CASE("flow relaxes a Gaussian to the soliton width") {
  const double mass = 1.0, temperature = 1.0, gamma = 0.125;
  const double sigma0 = qbm_soliton_width(mass, gamma, temperature);
  const PositionGrid grid(256, 40.0);
  const auto gen = qbm_pointer_generator(mass, gamma, temperature, grid);
  for (double start : {2.0, 0.5}) {
    std::vector<double> times{2.0, 4.0, 8.0, 12.0};
    const auto path = evolve_robust(gaussian_packet(grid, 0.0, start * sigma0), gen, times);
    std::vector<double> widths;
    for (const auto& xi : path) widths.push_back(std::sqrt(position_variance(xi, grid)));
    CHECK(widths.back() == doctest::Approx(sigma0).epsilon(0.05));
    // Monotone approach.
    CHECK(std::abs(widths.back() - sigma0) < std::abs(widths.front() - sigma0));
  }
}
