#include "decolab/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace decolab {
namespace {

constexpr int kBracketPoints = 256;
constexpr double kBisectionRelTol = 1e-10;
constexpr std::size_t kChunk = 64;
constexpr double kConditionLimit = 1e8;

void check_state(const StateVector& psi, Index dim) {
  if (psi.size() != dim) throw DimensionError("state vector does not match generator dimension");
  if (!psi.allFinite()) throw DomainError("state vector has non-finite entries");
}

StateVector normalized(const StateVector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero vector");
  return v / n;
}

}  // namespace

void JumpRecord::validate() const {
  if (!(horizon > start)) throw DomainError("record horizon must exceed its start time");
  double previous = start;
  for (const auto& e : events) {
    if (!(e.time > previous)) throw DomainError("record times must be strictly increasing");
    previous = e.time;
  }
  if (!(horizon > previous)) throw DomainError("record events must precede the horizon");
}

Operator effective_hamiltonian(const LindbladGenerator& gen) {
  Operator hc = gen.hamiltonian().cast<cplx>();
  for (const auto& ch : gen.channels()) hc -= 0.5 * kI * ch.rate * ch.op.adjoint() * ch.op;
  return hc;
}

NoJumpPropagator::NoJumpPropagator(const LindbladGenerator& gen) : hc_(decolab::effective_hamiltonian(gen)) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(hc_);
  if (solver.info() != Eigen::Success) return;
  vectors_ = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors_);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) > kConditionLimit) return;
  inverse_ = vectors_.inverse();
  eigenvalues_ = solver.eigenvalues();
  diagonal_ = true;
}

StateVector NoJumpPropagator::apply(const StateVector& psi, double tau) const {
  if (!(tau >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (tau == 0.0) return psi;
  if (diagonal_) {
    const Eigen::VectorXcd phases = (-kI * tau * eigenvalues_).array().exp();
    return vectors_ * (phases.asDiagonal() * (inverse_ * psi));
  }
  return propagator(tau) * psi;
}

Operator NoJumpPropagator::propagator(double tau) const {
  if (!(tau >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (diagonal_) {
    const Eigen::VectorXcd phases = (-kI * tau * eigenvalues_).array().exp();
    return vectors_ * phases.asDiagonal() * inverse_;
  }
  return expm(Operator(-kI * tau * hc_));
}

StateVector no_jump_propagate(const StateVector& psi, const LindbladGenerator& gen, double tau) {
  check_state(psi, gen.dim());
  return NoJumpPropagator(gen).apply(psi, tau);
}

std::optional<double> sample_jump_time(const StateVector& psi, const NoJumpPropagator& no_jump,
                                       double u, double t_max) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("uniform draw must lie in (0, 1)");
  if (!(t_max > 0.0)) return std::nullopt;
  auto survival = [&](double tau) { return no_jump.apply(psi, tau).squaredNorm(); };
  if (survival(t_max) > u) return std::nullopt;

  const double step = t_max / kBracketPoints;
  double lo = 0.0;
  double hi = t_max;
  for (int j = 1; j <= kBracketPoints; ++j) {
    const double tau = (j == kBracketPoints) ? t_max : step * j;
    if (survival(tau) <= u) {
      hi = tau;
      break;
    }
    lo = tau;
  }
  int iterations = 0;
  while (hi - lo > kBisectionRelTol * hi) {
    if (++iterations > 200) {
      throw ConvergenceError("waiting-time bisection did not converge", 0.5 * (lo + hi));
    }
    const double mid = 0.5 * (lo + hi);
    if (survival(mid) <= u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> sample_jump_time(const StateVector& psi, const LindbladGenerator& gen,
                                       double u, double t_max) {
  check_state(psi, gen.dim());
  return sample_jump_time(psi, NoJumpPropagator(gen), u, t_max);
}

JumpOutcome apply_jump(const StateVector& psi, const LindbladGenerator& gen, double u) {
  check_state(psi, gen.dim());
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("uniform draw must lie in [0, 1)");
  const auto& channels = gen.channels();
  std::vector<double> weights(channels.size());
  std::vector<StateVector> images(channels.size());
  double total = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    images[k] = channels[k].op * psi;
    weights[k] = channels[k].rate * images[k].squaredNorm();
    total += weights[k];
  }
  if (!(total > 0.0)) throw DomainError("no jump possible from this state");
  const double target = u * total;
  double acc = 0.0;
  std::size_t chosen = channels.size();
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    chosen = k;
    if (target < acc) break;
  }
  return {chosen, normalized(images[chosen])};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TrajectoryRng::TrajectoryRng(std::uint64_t base_seed, std::uint64_t index)
    : engine_(splitmix64(splitmix64(base_seed) ^ index)) {}

double TrajectoryRng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

TrajectoryResult run_trajectory(const StateVector& psi0, const LindbladGenerator& gen,
                                double horizon, std::uint64_t seed,
                                const std::vector<double>& checkpoints) {
  TrajectoryRng rng(seed, 0);
  return run_trajectory(psi0, gen, NoJumpPropagator(gen), horizon, rng, checkpoints);
}

TrajectoryResult run_trajectory(const StateVector& psi0, const LindbladGenerator& gen,
                                const NoJumpPropagator& no_jump, double horizon,
                                TrajectoryRng& rng, const std::vector<double>& checkpoints) {
  check_state(psi0, gen.dim());
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw DomainError("initial state must be normalized");
  if (!(horizon > 0.0)) throw DomainError("trajectory horizon must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] >= 0.0 && checkpoints[i] <= horizon) ||
        (i > 0 && checkpoints[i] < checkpoints[i - 1])) {
      throw DomainError("checkpoints must be sorted and inside [0, horizon]");
    }
  }

  TrajectoryResult result;
  result.record.horizon = horizon;
  result.checkpoints.reserve(checkpoints.size());
  std::size_t next_checkpoint = 0;
  StateVector psi = psi0;
  double t = 0.0;
  while (true) {
    const double u = rng.uniform();
    const auto tau = sample_jump_time(psi, no_jump, u, horizon - t);
    const double segment_end = tau ? t + *tau : horizon;
    while (next_checkpoint < checkpoints.size() &&
           (checkpoints[next_checkpoint] < segment_end ||
            (!tau && checkpoints[next_checkpoint] <= horizon))) {
      result.checkpoints.push_back(
          normalized(no_jump.apply(psi, std::max(0.0, checkpoints[next_checkpoint] - t))));
      ++next_checkpoint;
    }
    if (!tau) {
      result.psi_final = normalized(no_jump.apply(psi, horizon - t));
      break;
    }
    psi = normalized(no_jump.apply(psi, *tau));
    t = segment_end;
    const JumpOutcome jump = apply_jump(psi, gen, rng.uniform());
    psi = jump.psi;
    if (!(t < horizon)) {
      // A jump landing on the horizon within rounding counts as after it.
      result.psi_final = psi;
      break;
    }
    result.record.events.push_back({t, jump.channel});
  }
  return result;
}

StateVector apply_record(const StateVector& psi0, const LindbladGenerator& gen,
                         const JumpRecord& record) {
  check_state(psi0, gen.dim());
  record.validate();
  const NoJumpPropagator no_jump(gen);
  StateVector psi = psi0;
  double t = record.start;
  for (const auto& e : record.events) {
    if (e.channel >= gen.channels().size()) throw DomainError("record channel out of range");
    psi = no_jump.apply(psi, e.time - t);
    psi = gen.channels()[e.channel].op * psi;
    t = e.time;
  }
  psi = no_jump.apply(psi, record.horizon - t);
  return normalized(psi);
}

namespace {

Operator apply_record_superoperator(const JumpRecord& record, const Operator& rho0,
                                    const LindbladGenerator& gen) {
  record.validate();
  if (rho0.rows() != gen.dim()) throw DimensionError("state and generator dimensions differ");
  const NoJumpPropagator no_jump(gen);
  auto evolve = [&](const Operator& rho, double tau) {
    const Operator u = no_jump.propagator(tau);
    return Operator(u * rho * u.adjoint());
  };
  Operator rho = rho0;
  double t = record.start;
  for (const auto& e : record.events) {
    if (e.channel >= gen.channels().size()) throw DomainError("record channel out of range");
    rho = evolve(rho, e.time - t);
    const auto& ch = gen.channels()[e.channel];
    rho = ch.rate * ch.op * rho * ch.op.adjoint();
    t = e.time;
  }
  return evolve(rho, record.horizon - t);
}

}  // namespace

double record_probability_density(const JumpRecord& record, const DensityOperator& rho0,
                                  const LindbladGenerator& gen) {
  return std::max(0.0, apply_record_superoperator(record, rho0.matrix(), gen).trace().real());
}

DensityOperator condition_on_record(const JumpRecord& record, const DensityOperator& rho0,
                                    const LindbladGenerator& gen) {
  Operator rho = apply_record_superoperator(record, rho0.matrix(), gen);
  const double p = rho.trace().real();
  if (!(p > 0.0)) throw DomainError("record has zero probability; conditional state undefined");
  rho /= p;
  return DensityOperator(0.5 * (rho + rho.adjoint()));
}

std::vector<DensityOperator> ensemble_average(const StateVector& psi0,
                                              const LindbladGenerator& gen,
                                              const std::vector<double>& times,
                                              std::size_t n_traj, std::uint64_t base_seed,
                                              unsigned threads) {
  if (n_traj == 0) throw DomainError("need at least one trajectory");
  if (times.empty()) throw DomainError("need at least one sampling time");
  check_state(psi0, gen.dim());
  const double horizon = times.back();
  const NoJumpPropagator no_jump(gen);
  const Index d = gen.dim();
  const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
  std::vector<std::vector<Operator>> partial(
      n_chunks, std::vector<Operator>(times.size(), Operator::Zero(d, d)));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      while (!failed) {
        const std::size_t chunk = next.fetch_add(1);
        if (chunk >= n_chunks) break;
        const std::size_t begin = chunk * kChunk;
        const std::size_t end = std::min(n_traj, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
          TrajectoryRng rng(base_seed, i);
          TrajectoryResult r = (horizon > 0.0)
                                   ? run_trajectory(psi0, gen, no_jump, horizon, rng, times)
                                   : TrajectoryResult{{}, psi0, std::vector<StateVector>(times.size(), psi0)};
          for (std::size_t k = 0; k < times.size(); ++k) {
            partial[chunk][k] += r.checkpoints[k] * r.checkpoints[k].adjoint();
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<DensityOperator> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    Operator sum = Operator::Zero(d, d);
    for (std::size_t c = 0; c < n_chunks; ++c) sum += partial[c][k];
    sum /= static_cast<double>(n_traj);
    sum = hermitian_part(sum);
    sum /= sum.trace().real();
    out.emplace_back(std::move(sum));
  }
  return out;
}

DensityOperator ensemble_average(const StateVector& psi0, const LindbladGenerator& gen,
                                 double horizon, std::size_t n_traj, std::uint64_t base_seed,
                                 unsigned threads) {
  return ensemble_average(psi0, gen, std::vector<double>{horizon}, n_traj, base_seed, threads)
      .front();
}

}  // namespace decolab
