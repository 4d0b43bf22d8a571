#include "scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "decolab/channels.hpp"
#include "decolab/collisional.hpp"
#include "decolab/dephasing.hpp"
#include "decolab/lindblad.hpp"
#include "decolab/pointer_states.hpp"
#include "decolab/trajectories.hpp"
#include "decolab/units.hpp"
#include "decolab/weak_coupling.hpp"

namespace decolab::cli {
namespace {

constexpr double pi = std::numbers::pi;

// Fluent ParamSpec construction.
struct P {
  ParamSpec s;
  P(std::string name, ParamType type, std::string description) {
    s.name = std::move(name);
    s.type = type;
    s.description = std::move(description);
  }
  P& def(Json v) { s.default_value = std::move(v); return *this; }
  P& optional() { s.optional = true; return *this; }
  P& min(double v) { s.minimum = v; return *this; }
  P& above(double v) { s.minimum = v; s.exclusive_minimum = true; return *this; }
  P& max(double v) { s.maximum = v; return *this; }
  P& dim(Dimension d) { s.dimension = d; return *this; }
  P& choices(std::vector<std::string> c) { s.choices = std::move(c); return *this; }
  operator ParamSpec() const { return s; }
};

P num(std::string name, std::string desc) { return P(std::move(name), ParamType::number, std::move(desc)); }
P integer(std::string name, std::string desc) { return P(std::move(name), ParamType::integer, std::move(desc)); }
P flag(std::string name, std::string desc) { return P(std::move(name), ParamType::boolean, std::move(desc)); }
P choice(std::string name, std::string desc) { return P(std::move(name), ParamType::choice, std::move(desc)); }
P complex(std::string name, std::string desc) { return P(std::move(name), ParamType::complex, std::move(desc)); }
P list(std::string name, std::string desc) { return P(std::move(name), ParamType::number_list, std::move(desc)); }

std::vector<double> linear_grid(double t_max, std::int64_t n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

std::vector<double> log_grid(double lo, double hi, std::int64_t n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    t[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return t;
}

// Natural-unit value converted for output in the config's unit system.
double out_value(const Params& p, double natural, Dimension dim) {
  return p.units() == Units::si ? to_si(natural, dim) : natural;
}

// Momentum and its moments scale with hbar like a mass.
double out_momentum_power(const Params& p, double natural, int power) {
  double v = natural;
  for (int i = 0; i < power; ++i) v = out_value(p, v, Dimension::mass);
  return v;
}

Json json_list(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

void require_order(const Params& p, const char* lo, const char* hi, std::vector<Issue>& issues) {
  if (!(p.number(hi) > p.number(lo))) issues.push_back({std::string("params.") + hi, std::string("must exceed ") + lo});
}

Operator pauli_z() { return (Operator(2, 2) << 1, 0, 0, -1).finished(); }
Operator pauli_x() { return (Operator(2, 2) << 0, 1, 1, 0).finished(); }

StateVector qubit_state(const std::string& name, Index excited) {
  StateVector v = StateVector::Zero(2);
  if (name == "plus") {
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  } else {
    v(name == "excited" ? excited : 1 - excited) = 1.0;
  }
  return v;
}

StateVector cat_vector(cplx alpha, Index n) {
  const StateVector v = coherent_vector({alpha, n}) + coherent_vector({-alpha, n});
  return v / v.norm();
}

// ---------------------------------------------------------------------------

ScenarioDef dephase() {
  ScenarioDef s;
  s.name = "dephase";
  s.description = "exact qubit dephasing by a bosonic bath: decay functions F_vac, F_th and time regimes";
  s.params = {
      num("a", "coupling strength of the spectral density").def(1.0).above(0.0),
      num("omega_c", "cutoff frequency (rad/s in SI)").def(10.0).above(0.0),
      num("temperature", "bath temperature").def(0.1).min(0.0).dim(Dimension::temperature),
      integer("d", "spectral exponent: 1 Ohmic, 3 super-Ohmic").def(1).min(1).max(5),
      num("t_min", "first time of the log-spaced grid").def(0.01).above(0.0),
      num("t_max", "last time of the log-spaced grid").def(20.0).above(0.0),
      integer("n_t", "number of grid times").def(50).min(2).max(100000),
      list("times", "explicit sample times; replaces the grid").optional().min(0.0),
  };
  s.check = [](const Params& p, std::vector<Issue>& issues) { require_order(p, "t_min", "t_max", issues); };
  s.run = [](const Params& p, const RunContext&) {
    const dephasing::SpectralDensity j(p.number("a"), p.number("omega_c"), static_cast<int>(p.integer("d")));
    const double temperature = p.number("temperature");
    const auto times = p.has("times") ? p.list("times") : log_grid(p.number("t_min"), p.number("t_max"), p.integer("n_t"));
    const bool regimes = j.d == 1 && temperature > 0.0 && 1.0 / j.omega_c < 1.0 / (2.0 * pi * temperature);
    std::vector<double> f_vac, f_th, chi;
    std::vector<std::string> regime;
    for (double t : times) {
      f_vac.push_back(dephasing::F_vac(j, t));
      f_th.push_back(dephasing::F_th(j, temperature, t));
      chi.push_back(std::exp(-f_vac.back() - f_th.back()));
      regime.emplace_back(regimes ? dephasing::regime_name(dephasing::classify_regime(j, temperature, t).regime) : "n/a");
    }
    ResultSeries out;
    out.add("t", times);
    out.add("F_vac", f_vac);
    out.add("F_th", f_th);
    out.add("abs_chi", chi);
    out.add("regime", regime);
    if (j.d == 3 && temperature > 0.0) out.summarize("F_th_plateau", dephasing::F_superohmic_limit(j, temperature));
    if (regimes) {
      out.summarize("cutoff_time", 1.0 / j.omega_c);
      out.summarize("matsubara_time", 1.0 / (2.0 * pi * temperature));
    }
    return out;
  };
  return s;
}

ScenarioDef nqubit() {
  ScenarioDef s;
  s.name = "nqubit";
  s.description = "N-qubit dephasing: coherence exponent weights and decoherence-free subspaces";
  s.params = {
      integer("n_qubits", "number of qubits").def(3).min(1).max(8),
      choice("coupling", "common reservoir or independent reservoirs").def("same").choices({"same", "different"}),
      num("F", "single-qubit decay function value").def(1.0).min(0.0),
  };
  s.run = [](const Params& p, const RunContext&) {
    const auto n = static_cast<unsigned>(p.integer("n_qubits"));
    const auto coupling = p.choice("coupling") == "same" ? dephasing::Coupling::same_reservoir
                                                          : dephasing::Coupling::different_reservoirs;
    const double f = p.number("F");
    std::vector<double> m_col, n_col, em, en, weight, coherence;
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < dim; ++m) {
      for (std::uint64_t k = 0; k < dim; ++k) {
        m_col.push_back(static_cast<double>(m));
        n_col.push_back(static_cast<double>(k));
        em.push_back(std::popcount(m));
        en.push_back(std::popcount(k));
        weight.push_back(static_cast<double>(dephasing::n_qubit_weight(n, m, k, coupling)));
        coherence.push_back(dephasing::n_qubit_coherence(n, m, k, coupling, f));
      }
    }
    ResultSeries out;
    out.add("m", m_col);
    out.add("n", n_col);
    out.add("excitations_m", em);
    out.add("excitations_n", en);
    out.add("weight", weight);
    out.add("coherence", coherence);
    out.summarize("weight_all_zero_vs_all_one", dephasing::n_qubit_weight(n, 0, dim - 1, coupling));
    Json sizes = Json::array();
    for (const auto& g : dephasing::dfs_states(n)) sizes.push_back(g.size());
    out.summarize("dfs_sizes", sizes);
    return out;
  };
  return s;
}

ScenarioDef lindblad() {
  ScenarioDef s;
  s.name = "lindblad";
  s.description = "Lindblad master equation for qubit decay, qubit dephasing or a damped oscillator";
  s.params = {
      choice("model", "generator").def("qubit_decay").choices({"qubit_decay", "qubit_dephasing", "damped_oscillator"}),
      num("gamma", "rate").def(1.0).above(0.0),
      num("omega", "level splitting or oscillator frequency (rad/s)").def(1.0).min(0.0),
      integer("n_max", "Fock dimension for the oscillator").def(20).min(2).max(200),
      complex("alpha", "initial coherent amplitude for the oscillator").def(1.0),
      choice("initial", "initial qubit state").def("plus").choices({"excited", "ground", "plus"}),
      num("t_max", "final time").def(5.0).above(0.0),
      integer("n_t", "number of output times").def(51).min(2).max(100000),
  };
  s.run = [](const Params& p, const RunContext&) {
    const std::string model = p.choice("model");
    const double gamma = p.number("gamma"), omega = p.number("omega");
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    ResultSeries out;
    std::vector<double> trace, purity;
    if (model == "damped_oscillator") {
      const Index n = p.integer("n_max");
      const cplx alpha = p.complex("alpha");
      const auto gen = damped_oscillator_generator(omega, gamma, n);
      const Operator a = annihilation(n), num_op = number_operator(n);
      DensityOperator rho = coherent_state({alpha, n});
      std::vector<double> mean_n, fid, top;
      std::vector<cplx> mean_a;
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) rho = propagate(gen, rho, times[i] - times[i - 1]);
        trace.push_back(rho.matrix().trace().real());
        purity.push_back(rho.purity());
        mean_n.push_back((num_op * rho.matrix()).trace().real());
        mean_a.push_back((a * rho.matrix()).trace());
        const auto target = coherent_vector({damped_coherent_amplitude(alpha, omega, gamma, times[i]), n});
        fid.push_back(target.dot(rho.matrix() * target).real());
        top.push_back(top_fock_population(rho.matrix()));
      }
      out.add("t", times);
      out.add("trace", trace);
      out.add("purity", purity);
      out.add("mean_n", mean_n);
      out.add("mean_a", mean_a);
      out.add("coherent_fidelity", fid);
      out.add("top_levels_population", top);
      return out;
    }
    // |1> is the upper level of H = -(omega/2) sigma_z; sigma_- = |0><1|.
    Operator lower = Operator::Zero(2, 2);
    lower(0, 1) = 1.0;
    const Operator h = -0.5 * omega * pauli_z();
    const LindbladGenerator gen = model == "qubit_decay" ? LindbladGenerator(h, {{gamma, lower}})
                                                         : LindbladGenerator(h, {{gamma, pauli_z()}});
    DensityOperator rho = DensityOperator::pure(qubit_state(p.choice("initial"), 1));
    std::vector<double> excited;
    std::vector<cplx> coherence;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0) rho = propagate(gen, rho, times[i] - times[i - 1]);
      trace.push_back(rho.matrix().trace().real());
      purity.push_back(rho.purity());
      excited.push_back(rho(1, 1).real());
      coherence.push_back(rho(0, 1));
    }
    out.add("t", times);
    out.add("trace", trace);
    out.add("purity", purity);
    out.add("p_excited", excited);
    out.add("rho_01", coherence);
    return out;
  };
  return s;
}

ScenarioDef cat() {
  ScenarioDef s;
  s.name = "cat";
  s.description = "decoherence of a damped-oscillator cat state; pendulum numbers in SI";
  s.params = {
      complex("alpha0", "first branch amplitude").optional(),
      complex("beta0", "second branch amplitude (default -alpha0)").optional(),
      num("mass", "oscillator mass, for a cat displaced to +-displacement").optional().above(0.0).dim(Dimension::mass),
      num("displacement", "branch displacement x; sets alpha0 = alpha(x), beta0 = -alpha0").optional().above(0.0),
      num("omega", "oscillator frequency (rad/s)").def(1.0).above(0.0),
      num("gamma", "damping rate").def(1.0).above(0.0),
      integer("n_max", "Fock dimension for the numerical integrator").def(60).min(2).max(200),
      flag("fock", "also propagate the truncated-Fock master equation").def(false),
      num("t_max", "final time").def(0.5).above(0.0),
      integer("n_t", "number of output times").def(51).min(2).max(100000),
  };
  s.check = [](const Params& p, std::vector<Issue>& issues) {
    if (p.has("mass") != p.has("displacement")) {
      issues.push_back({"params.displacement", "mass and displacement must be given together"});
    }
    if (p.has("displacement") && (p.has("alpha0") || p.has("beta0"))) {
      issues.push_back({"params.alpha0", "give either alpha0/beta0 or mass/displacement, not both"});
    }
  };
  s.run = [](const Params& p, const RunContext&) {
    const double omega = p.number("omega"), gamma = p.number("gamma");
    cplx a0 = 2.0, b0;
    if (p.has("displacement")) {
      a0 = coherent_amplitude(p.number("mass"), omega, p.number("displacement"), 0.0);
    } else if (p.has("alpha0")) {
      a0 = p.complex("alpha0");
    }
    b0 = p.has("beta0") ? p.complex("beta0") : -a0;
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    ResultSeries out;
    std::vector<cplx> analytic;
    std::vector<double> magnitude;
    for (double t : times) {
      analytic.push_back(cat_coherence_factor(a0, b0, gamma, t));
      magnitude.push_back(std::abs(analytic.back()));
    }
    out.add("t", times);
    out.add("c_analytic", analytic);
    out.add("abs_c_analytic", magnitude);

    const double ratio = cat_decoherence_ratio(a0, b0);
    out.summarize("alpha0", Json::array({a0.real(), a0.imag()}));
    out.summarize("beta0", Json::array({b0.real(), b0.imag()}));
    out.summarize("gamma_deco_over_gamma", ratio);
    out.summarize("gamma_deco", ratio * gamma);

    // Short-time fit window well inside the initial linear decay.
    const double window = std::min(1e-3 / gamma, 1e-3 / std::max(ratio * gamma, gamma));
    std::vector<double> fit_t;
    std::vector<cplx> fit_analytic;
    for (int i = 0; i <= 10; ++i) {
      fit_t.push_back(window * i);
      fit_analytic.push_back(cat_coherence_factor(a0, b0, gamma, fit_t.back()));
    }
    out.summarize("fitted_rate_analytic", fit_initial_decay_rate(fit_t, fit_analytic));

    if (p.boolean("fock")) {
      const Index n = p.integer("n_max");
      check_truncation({a0, n});
      check_truncation({b0, n});
      const auto gen = damped_oscillator_generator(omega, gamma, n);
      const auto rho0 = cat_state(a0, b0, n);
      auto coherence_at = [&](const DensityOperator& rho, double t) {
        return extract_cat_coherence(rho.matrix(), coherent_vector({damped_coherent_amplitude(a0, omega, gamma, t), n}),
                                     coherent_vector({damped_coherent_amplitude(b0, omega, gamma, t), n}));
      };
      std::vector<cplx> fock;
      DensityOperator rho = rho0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0) rho = propagate(gen, rho, times[i] - times[i - 1]);
        fock.push_back(coherence_at(rho, times[i]));
      }
      out.add("c_fock", fock);
      std::vector<cplx> fit_fock;
      for (double t : fit_t) fit_fock.push_back(coherence_at(propagate(gen, rho0, t), t));
      out.summarize("fitted_rate_fock", fit_initial_decay_rate(fit_t, fit_fock));
    }
    return out;
  };
  return s;
}

ScenarioDef qbm() {
  ScenarioDef s;
  s.name = "qbm";
  s.description = "quantum Brownian motion of a free particle: closed-form moments and coherence decay";
  s.params = {
      num("mass", "particle mass").def(1.0).above(0.0).dim(Dimension::mass),
      num("gamma", "relaxation rate").def(0.1).above(0.0),
      num("temperature", "bath temperature").def(2.0).above(0.0).dim(Dimension::temperature),
      num("x0", "initial mean position").def(0.0),
      num("p0", "initial mean momentum").def(0.0).dim(Dimension::mass),
      num("sigma_x0", "initial position spread of a minimum-uncertainty packet").def(std::sqrt(0.5)).above(0.0),
      num("separation", "x - x' for the coherence decay rate").def(1.0).min(0.0),
      num("t_max", "final time").def(100.0).above(0.0),
      integer("n_t", "number of output times").def(101).min(2).max(100000),
  };
  s.run = [](const Params& p, const RunContext&) {
    const double m = p.number("mass"), gamma = p.number("gamma"), temperature = p.number("temperature");
    QbmMoments init;
    init.mean_x = p.number("x0");
    init.mean_p = p.number("p0");
    init.var_x = p.number("sigma_x0") * p.number("sigma_x0");
    init.var_p = 0.25 / init.var_x;
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    std::vector<double> mx, mp, vx, vp, cxp, kin;
    for (double t : times) {
      const auto mo = qbm_moments(m, gamma, temperature, init, t);
      mx.push_back(mo.mean_x);
      mp.push_back(out_momentum_power(p, mo.mean_p, 1));
      vx.push_back(mo.var_x);
      vp.push_back(out_momentum_power(p, mo.var_p, 2));
      cxp.push_back(out_momentum_power(p, mo.cov_xp, 1));
      kin.push_back(out_value(p, mo.kinetic_energy(m), Dimension::energy));
    }
    ResultSeries out;
    out.add("t", times);
    out.add("mean_x", mx);
    out.add("mean_p", mp);
    out.add("var_x", vx);
    out.add("var_p", vp);
    out.add("cov_xp", cxp);
    out.add("kinetic_energy", kin);
    const double sep = p.number("separation");
    out.summarize("equilibrium_kinetic_energy", out_value(p, 0.5 * temperature, Dimension::energy));
    out.summarize("var_x_spread_rate", qbm_position_spread_rate(m, gamma, temperature));
    out.summarize("thermal_de_broglie_sq", thermal_de_broglie_sq(m, temperature));
    out.summarize("coherence_decay_over_gamma", qbm_coherence_ratio(0.0, sep, temperature, m));
    return out;
  };
  return s;
}

ScenarioDef traject() {
  ScenarioDef s;
  s.name = "traject";
  s.description = "quantum-jump unravelling: ensemble mean against the master equation";
  s.params = {
      choice("model", "generator").def("qubit_decay").choices({"qubit_decay", "damped_oscillator"}),
      num("gamma", "decay rate").def(1.0).above(0.0),
      num("omega", "level splitting or oscillator frequency (rad/s)").def(0.0).min(0.0),
      integer("n_max", "Fock dimension for the oscillator").def(20).min(2).max(200),
      complex("alpha", "coherent amplitude of the oscillator start").def(1.2),
      choice("initial", "start: excited or plus (qubit), coherent or cat (oscillator)")
          .def("excited").choices({"excited", "plus", "coherent", "cat"}),
      integer("n_traj", "number of trajectories").def(1000).min(1).max(10000000),
      num("t_max", "final time").def(2.0).above(0.0),
      integer("n_t", "number of output times").def(21).min(2).max(10000),
  };
  s.check = [](const Params& p, std::vector<Issue>& issues) {
    const bool qubit = p.choice("model") == "qubit_decay";
    const std::string init = p.choice("initial");
    if (qubit != (init == "excited" || init == "plus")) {
      issues.push_back({"params.initial", "'" + init + "' does not apply to model '" + p.choice("model") + "'"});
    }
  };
  s.run = [](const Params& p, const RunContext& ctx) {
    const double gamma = p.number("gamma"), omega = p.number("omega");
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    LindbladGenerator gen(Operator::Zero(1, 1), {});
    StateVector psi0;
    Operator observable;
    std::string obs_name;
    if (p.choice("model") == "qubit_decay") {
      Operator lower = Operator::Zero(2, 2);
      lower(0, 1) = 1.0;
      gen = LindbladGenerator(-0.5 * omega * pauli_z(), {{gamma, lower}});
      psi0 = qubit_state(p.choice("initial"), 1);
      observable = Operator::Zero(2, 2);
      observable(1, 1) = 1.0;
      obs_name = "p_excited";
    } else {
      const Index n = p.integer("n_max");
      gen = damped_oscillator_generator(omega, gamma, n);
      psi0 = p.choice("initial") == "cat" ? cat_vector(p.complex("alpha"), n) : coherent_vector({p.complex("alpha"), n});
      observable = number_operator(n);
      obs_name = "mean_n";
    }
    const auto n_traj = static_cast<std::size_t>(p.integer("n_traj"));
    const auto avg = ensemble_average(psi0, gen, times, n_traj, ctx.seed, ctx.threads);
    std::vector<double> mc, exact, dist;
    const auto rho0 = DensityOperator::pure(psi0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto ref = times[i] == 0.0 ? rho0 : propagate(gen, rho0, times[i]);
      mc.push_back((observable * avg[i].matrix()).trace().real());
      exact.push_back((observable * ref.matrix()).trace().real());
      dist.push_back(trace_distance(avg[i], ref));
    }
    ResultSeries out;
    out.add("t", times);
    out.add(obs_name + "_trajectories", mc);
    out.add(obs_name + "_master", exact);
    out.add("trace_distance", dist);
    out.summarize("n_traj", n_traj);
    return out;
  };
  return s;
}

ScenarioDef weakcoupling() {
  ScenarioDef s;
  s.name = "weakcoupling";
  s.description = "Born-Markov-secular qubit in an Ohmic thermal bath coupled through sigma_x";
  s.params = {
      num("omega0", "qubit splitting (rad/s)").def(1.0).above(0.0),
      num("temperature", "bath temperature").def(0.5).min(0.0).dim(Dimension::temperature),
      num("a", "Ohmic coupling strength").def(0.05).above(0.0),
      num("omega_c", "bath cutoff (rad/s)").def(10.0).above(0.0),
      choice("initial", "initial state").def("excited").choices({"excited", "ground", "plus"}),
      num("t_max", "final time").def(50.0).above(0.0),
      integer("n_t", "number of output times").def(51).min(2).max(100000),
  };
  s.run = [](const Params& p, const RunContext&) {
    const double w0 = p.number("omega0"), temperature = p.number("temperature");
    const dephasing::SpectralDensity j(p.number("a"), p.number("omega_c"), 1);
    // Emission (w > 0) at 2 pi J (1 + n), absorption at 2 pi J n.
    auto occupation = [temperature](double w) { return temperature > 0.0 ? 1.0 / std::expm1(w / temperature) : 0.0; };
    weak::BathSpectrum spectrum;
    spectrum.gamma = [&](double w) {
      const double aw = std::abs(w);
      const double rate = w > 0.0 ? 2.0 * pi * j(aw) * (1.0 + occupation(aw)) : w < 0.0 ? 2.0 * pi * j(aw) * occupation(aw) : 0.0;
      return Eigen::MatrixXcd::Constant(1, 1, rate);
    };
    // |0> is the upper level of (w0/2) sigma_z.
    const Operator h = 0.5 * w0 * pauli_z();
    const auto decomp = weak::decompose_eigenoperators(h, {pauli_x()});
    const auto gen = weak::build_secular_generator(decomp, spectrum);
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    DensityOperator rho = DensityOperator::pure(qubit_state(p.choice("initial"), 0));
    std::vector<double> excited;
    std::vector<cplx> coherence;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0) rho = propagate(gen, rho, times[i] - times[i - 1]);
      excited.push_back(rho(0, 0).real());
      coherence.push_back(rho(0, 1));
    }
    ResultSeries out;
    out.add("t", times);
    out.add("p_excited", excited);
    out.add("rho_eg", coherence);
    const double down = spectrum.gamma(w0)(0, 0).real(), up = spectrum.gamma(-w0)(0, 0).real();
    out.summarize("emission_rate", down);
    out.summarize("absorption_rate", up);
    out.summarize("stationary_excited_population", up / (up + down));
    if (temperature > 0.0) {
      const Operator boltzmann = expm(-h / temperature);
      out.summarize("gibbs_residual", apply_generator(gen, boltzmann / boltzmann.trace()).norm());
    }
    return out;
  };
  return s;
}

std::vector<ParamSpec> gas_params() {
  return {
      num("gas_density", "gas number density (1/m^3 in SI)").def(1.0).above(0.0),
      num("gas_mass", "gas particle mass").def(1.0).above(0.0).dim(Dimension::mass),
      num("temperature", "gas temperature").def(1.0).above(0.0).dim(Dimension::temperature),
  };
}

collisional::GasModel gas_from(const Params& p) {
  return {p.number("gas_density"), p.number("gas_mass"), p.number("temperature")};
}

ScenarioDef collide() {
  ScenarioDef s;
  s.name = "collide";
  s.description = "collisional localization rate F(x) of a heavy particle in a thermal gas";
  s.params = gas_params();
  const std::vector<ParamSpec> more{
      choice("amplitude", "scattering model").def("constant").choices({"constant", "hard_sphere"}),
      complex("f0", "constant s-wave amplitude (m)").def(0.5),
      num("radius", "hard-sphere radius (m)").def(0.5).above(0.0),
      num("x_min", "smallest separation (m)").def(0.01).above(0.0),
      num("x_max", "largest separation (m)").def(100.0).above(0.0),
      integer("n_x", "number of log-spaced separations").def(41).min(2).max(10000),
      flag("cross_check", "also evaluate F(x) from the momentum-gain rate").def(false),
  };
  s.params.insert(s.params.end(), more.begin(), more.end());
  s.check = [](const Params& p, std::vector<Issue>& issues) { require_order(p, "x_min", "x_max", issues); };
  s.run = [](const Params& p, const RunContext&) {
    const auto gas = gas_from(p);
    const auto f = p.choice("amplitude") == "constant" ? collisional::constant_amplitude(p.complex("f0"))
                                                       : collisional::hard_sphere_amplitude(p.number("radius"), gas.mass);
    const double f_inf = collisional::total_collision_rate(f, gas);
    const auto xs = log_grid(p.number("x_min"), p.number("x_max"), p.integer("n_x"));
    std::vector<double> rate, ratio, from_gain;
    for (double x : xs) {
      rate.push_back(collisional::localization_rate(f, gas, x));
      ratio.push_back(rate.back() / f_inf);
      if (p.boolean("cross_check")) from_gain.push_back(collisional::localization_rate_from_gain(f, gas, x));
    }
    ResultSeries out;
    out.add("x", xs);
    out.add("F", rate);
    out.add("F_over_F_inf", ratio);
    if (p.boolean("cross_check")) {
      out.add("F_from_gain", from_gain);
      out.summarize("momentum_gain_total", collisional::momentum_gain_total(f, gas));
    }
    out.summarize("F_inf", f_inf);
    out.summarize("mean_speed", gas.mean_speed());
    out.summarize("localization_length", 1.0 / (gas.mass * gas.mean_speed()));
    return out;
  };
  return s;
}

ScenarioDef dot() {
  ScenarioDef s;
  s.name = "dot";
  s.description = "internal channels of a particle scattering a thermal gas: rates, shifts and populations";
  s.params = gas_params();
  const std::vector<ParamSpec> more{
      list("energies", "channel energies").def(Json::array({0.0, 1.0})).dim(Dimension::energy),
      list("f_elastic", "constant elastic amplitude per channel (m)").def(Json::array({0.5, -0.3})),
      num("f_inelastic", "constant amplitude for every channel change (m)").def(0.2),
      list("populations", "initial populations of a pure state with real amplitudes").def(Json::array({0.5, 0.5})).min(0.0),
      num("t_max", "final time").def(5.0).above(0.0),
      integer("n_t", "number of output times").def(51).min(2).max(100000),
  };
  s.params.insert(s.params.end(), more.begin(), more.end());
  s.check = [](const Params& p, std::vector<Issue>& issues) {
    const auto n = p.list("energies").size();
    if (n > 8) issues.push_back({"params.energies", "at most 8 channels"});
    if (p.list("f_elastic").size() != n) issues.push_back({"params.f_elastic", "needs one amplitude per channel"});
    const auto pops = p.list("populations");
    if (pops.size() != n) issues.push_back({"params.populations", "needs one population per channel"});
    double sum = 0.0;
    for (double x : pops) sum += x;
    if (std::abs(sum - 1.0) > 1e-9) issues.push_back({"params.populations", "must sum to 1"});
  };
  s.run = [](const Params& p, const RunContext&) {
    const auto gas = gas_from(p);
    const auto energies = p.list("energies");
    const auto f_el = p.list("f_elastic");
    const double f_in = p.number("f_inelastic");
    const std::size_t n = energies.size();
    collisional::ChannelSpec spec{energies, {}};
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t a0 = 0; a0 < n; ++a0) {
        if (a == a0) {
          spec.amplitudes[{a, a0}] = collisional::constant_amplitude(f_el[a]);
        } else if (f_in != 0.0) {
          spec.amplitudes[{a, a0}] = collisional::constant_amplitude(f_in);
        }
      }
    }
    const auto tensor = collisional::dot_rate_tensor(spec, gas);
    const auto lv = collisional::dot_liouvillian(tensor);
    StateVector psi(static_cast<Index>(n));
    const auto pops = p.list("populations");
    for (std::size_t k = 0; k < n; ++k) psi(static_cast<Index>(k)) = std::sqrt(pops[k]);
    const auto rho0 = DensityOperator::pure(psi);
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    std::vector<std::vector<double>> populations(n);
    std::vector<cplx> coherence;
    for (double t : times) {
      const Operator rho = expm_apply(lv, rho0.matrix(), t);
      for (std::size_t k = 0; k < n; ++k) populations[k].push_back(rho(static_cast<Index>(k), static_cast<Index>(k)).real());
      if (n >= 2) coherence.push_back(rho(0, 1));
    }
    ResultSeries out;
    out.add("t", times);
    for (std::size_t k = 0; k < n; ++k) out.add("p_" + std::to_string(k), populations[k]);
    if (n >= 2) out.add("rho_01", coherence);
    std::vector<double> shifts;
    for (double e : tensor.shifts) shifts.push_back(out_value(p, e, Dimension::energy));
    out.summarize("energy_shifts", json_list(shifts));
    if (n >= 2) {
      out.summarize("elastic_dephasing_rate_01",
                    collisional::elastic_dephasing_rate(spec.amplitudes.at({0, 0}), spec.amplitudes.at({1, 1}), gas));
      out.summarize("rate_1_to_0", tensor(0, 0, 1, 1).real());
      out.summarize("rate_0_to_1", tensor(1, 1, 0, 0).real());
    }
    return out;
  };
  return s;
}

ScenarioDef pointer() {
  ScenarioDef s;
  s.name = "pointer";
  s.description = "robust states from the purity-preserving flow: damped oscillator or QBM soliton";
  s.params = {
      choice("model", "generator").def("oscillator").choices({"oscillator", "qbm"}),
      num("omega", "oscillator frequency (rad/s)").def(1.0).min(0.0),
      num("gamma", "damping or localization rate").def(0.5).above(0.0),
      integer("n_max", "Fock dimension for the oscillator").def(40).min(2).max(200),
      complex("alpha", "initial coherent amplitude for the oscillator").def(1.5),
      num("mass", "particle mass (qbm)").def(1.0).above(0.0).dim(Dimension::mass),
      num("temperature", "bath temperature (qbm)").def(1.0).above(0.0).dim(Dimension::temperature),
      integer("grid_points", "position grid size (qbm)").def(256).min(2).max(2048),
      num("span_over_sigma0", "grid span in units of the soliton width (qbm)").def(40.0).above(0.0),
      num("initial_width_over_sigma0", "width of the initial Gaussian (qbm)").def(2.0).above(0.0),
      flag("flow", "integrate the flow; false reports only the soliton width").def(true),
      num("t_max", "final time").def(4.0).above(0.0),
      integer("n_t", "number of output times").def(21).min(2).max(10000),
  };
  s.run = [](const Params& p, const RunContext&) {
    const auto times = linear_grid(p.number("t_max"), p.integer("n_t"));
    const double gamma = p.number("gamma");
    ResultSeries out;
    if (p.choice("model") == "oscillator") {
      const Index n = p.integer("n_max");
      const double omega = p.number("omega");
      const cplx alpha = p.complex("alpha");
      const auto gen = damped_oscillator_generator(omega, gamma, n);
      const StateVector xi0 = coherent_vector({alpha, n});
      std::vector<StateVector> path{xi0};
      if (p.boolean("flow")) {
        const std::vector<double> later(times.begin() + 1, times.end());
        const auto rest = pointer::evolve_robust(xi0, gen, later);
        path.insert(path.end(), rest.begin(), rest.end());
      } else {
        path.assign(times.size(), xi0);
      }
      const Operator num_op = number_operator(n);
      std::vector<double> fid, mean_n, entropy;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const auto target = coherent_vector({damped_coherent_amplitude(alpha, omega, gamma, times[i]), n});
        fid.push_back(std::norm(target.dot(path[i])));
        mean_n.push_back(path[i].dot(num_op * path[i]).real());
        entropy.push_back(pointer::linear_entropy_rate(DensityOperator::pure(path[i]), gen));
      }
      out.add("t", times);
      out.add("coherent_fidelity", fid);
      out.add("mean_n", mean_n);
      out.add("linear_entropy_rate", entropy);
      return out;
    }
    const double m = p.number("mass"), temperature = p.number("temperature");
    const double sigma0 = pointer::qbm_soliton_width(m, gamma, temperature);
    out.summarize("sigma0", sigma0);
    std::vector<double> width;
    if (p.boolean("flow")) {
      const pointer::PositionGrid grid(p.integer("grid_points"), p.number("span_over_sigma0") * sigma0);
      const auto gen = pointer::qbm_pointer_generator(m, gamma, temperature, grid);
      const StateVector xi0 = pointer::gaussian_packet(grid, 0.0, p.number("initial_width_over_sigma0") * sigma0);
      std::vector<StateVector> path{xi0};
      const std::vector<double> later(times.begin() + 1, times.end());
      const auto rest = pointer::evolve_robust(xi0, gen, later);
      path.insert(path.end(), rest.begin(), rest.end());
      for (const auto& xi : path) width.push_back(std::sqrt(pointer::position_variance(xi, grid)));
    } else {
      width.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
    }
    std::vector<double> ratio;
    for (double w : width) ratio.push_back(w / sigma0);
    out.add("t", times);
    out.add("width", width);
    out.add("width_over_sigma0", ratio);
    return out;
  };
  return s;
}

}  // namespace

const std::vector<ScenarioDef>& scenarios() {
  static const std::vector<ScenarioDef> all{dephase(), nqubit(), lindblad(), cat(), qbm(),
                                            traject(), weakcoupling(), collide(), dot(), pointer()};
  return all;
}

}  // namespace decolab::cli
