#pragma once

// Genetic algorithm for energy-efficiency maximization. Minimizes 1/eta over
// user powers, RIS phases and amplitudes, blocklength and retransmission
// count, with feasibility-dominance constraint handling.

#include <risjam/scenario.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace risjam {

struct ConstraintSet
{
  double delay_thr = 1e-3;
  double rel_thr = 0.99999;
  double beta_max = 100.0;
  double p_max = 0.1;
  double p_min = 1e-6;
  long l_max = 10;
  long nb_min = 1;
  long nb_max = 400;

  void validate() const
  {
    if (!(delay_thr > 0.0))
      throw Error("delay threshold must be positive");
    if (!(rel_thr > 0.0 && rel_thr < 1.0))
      throw Error("reliability threshold must lie in (0, 1)");
    if (!(beta_max > 0.0))
      throw Error("beta_max must be positive");
    if (!(p_min > 0.0 && p_min <= p_max))
      throw Error("power bounds must satisfy 0 < p_min <= p_max");
    if (l_max < 1)
      throw Error("retransmission bound must be at least 1");
    if (nb_min < 1 || nb_max < nb_min)
      throw Error("blocklength bounds must satisfy 1 <= min <= max");
  }
};

struct GaSettings
{
  std::size_t population_size = 200;
  std::size_t max_generations = 100;
  double crossover_rate = 0.9;
  /// Per-gene mutation probability; 0 selects 1/dimension.
  double mutation_rate = 0.0;
  /// Gaussian step in normalized gene units, multiplied by `mutation_decay` each generation.
  double mutation_scale = 0.1;
  double mutation_decay = 0.99;
  std::size_t elite_count = 2;
  std::size_t tournament_size = 2;
  std::uint64_t rng_seed = 1;
  double constraint_tolerance = 1e-30;
  double function_tolerance = 1e-30;
  std::size_t stall_generations = 50;
  /// Share of the initial population whose phases are co-phased to one user.
  double cophase_seed_fraction = 0.1;
  std::size_t threads = 1;

  static GaSettings desk() { return {}; }

  static GaSettings paper()
  {
    GaSettings s;
    s.population_size = 2000;
    s.max_generations = 200;
    return s;
  }

  void validate() const
  {
    if (population_size == 0)
      throw Error("population size must be positive");
    if (elite_count >= population_size)
      throw Error("elite count must be smaller than the population");
    if (tournament_size == 0)
      throw Error("tournament size must be positive");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) ||
        !(mutation_rate >= 0.0 && mutation_rate <= 1.0))
      throw Error("crossover and mutation rates must be probabilities");
    if (!(mutation_scale >= 0.0) || !(mutation_decay > 0.0))
      throw Error("mutation scale must be non-negative and decay positive");
    if (!(constraint_tolerance >= 0.0) || !(function_tolerance >= 0.0))
      throw Error("tolerances must be non-negative");
    if (!(cophase_seed_fraction >= 0.0 && cophase_seed_fraction <= 1.0))
      throw Error("co-phase seed fraction must be a probability");
  }
};

struct DecisionVector
{
  std::vector<double> user_powers;
  std::vector<double> phases;
  std::vector<double> amplitudes;
  long blocklength = 1;
  long retransmissions = 1;

  static std::size_t dimension(std::size_t users, std::size_t elements)
  {
    return users + 2 * elements + 2;
  }

  bool operator==(const DecisionVector&) const = default;
};

/// Non-negative residuals max(0, g(x)) of the non-box constraints.
struct ConstraintViolations
{
  std::vector<double> delay;       // tau_k - tau_thr
  std::vector<double> reliability; // Rel_thr - Rel_k
  std::vector<double> stability;   // rho_k - (1 - 1e-9)
  std::vector<double> ordering;    // P_k - P_{k+1}

  double total() const
  {
    double t = 0.0;
    for (const auto* v : {&delay, &reliability, &stability, &ordering})
      for (double x : *v)
        t += x;
    return t;
  }

  bool operator==(const ConstraintViolations&) const = default;
};

struct Evaluation
{
  double objective = 0.0;
  ConstraintViolations violations;
  double total_violation = 0.0;
};

/// Objective assigned when eta is zero or undefined (unstable queue).
inline constexpr double large_objective = 1e300;
inline constexpr double stability_margin = 1e-9;

inline bool is_feasible(double total_violation, double tolerance)
{
  return tolerance < DBL_EPSILON ? total_violation == 0.0 : total_violation <= tolerance;
}

inline bool is_feasible(const Evaluation& e, double tolerance)
{
  return is_feasible(e.total_violation, tolerance);
}

/// Feasible beats infeasible; then lower objective (feasible) or lower total
/// violation (infeasible); then lower index.
inline bool ranks_before(const Evaluation& a, std::size_t ia, const Evaluation& b, std::size_t ib,
                         double tolerance)
{
  const bool fa = is_feasible(a, tolerance);
  const bool fb = is_feasible(b, tolerance);
  if (fa != fb)
    return fa;
  const double ka = fa ? a.objective : a.total_violation;
  const double kb = fa ? b.objective : b.total_violation;
  if (ka != kb)
    return ka < kb;
  return ia < ib;
}

inline std::vector<std::size_t> rank(std::span<const Evaluation> evals, double tolerance)
{
  std::vector<std::size_t> order(evals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks_before(evals[a], a, evals[b], b, tolerance);
  });
  return order;
}

inline Evaluation evaluate_fitness(const DecisionVector& x, const Scenario& scen,
                                   const ChannelSet& ch, const ConstraintSet& cons)
{
  const PowerAllocation powers{x.user_powers};
  const BeamformConfig beam(x.amplitudes, x.phases);
  const auto rep = evaluate_metrics(scen, ch, beam, powers, x.blocklength, x.retransmissions);
  const std::size_t users = ch.user_count();

  Evaluation ev;
  auto& v = ev.violations;
  v.delay.resize(users);
  v.reliability.resize(users);
  v.stability.resize(users);
  v.ordering.resize(users > 0 ? users - 1 : 0);
  for (std::size_t k = 0; k < users; ++k) {
    const bool stable = rep.utilization[k] < 1.0;
    v.delay[k] = stable ? std::max(0.0, rep.mean_delay[k] - cons.delay_thr) : 0.0;
    v.reliability[k] = std::max(0.0, cons.rel_thr - rep.link.reliability[k]);
    v.stability[k] = std::max(0.0, rep.utilization[k] - (1.0 - stability_margin));
    if (k + 1 < users)
      v.ordering[k] = std::max(0.0, x.user_powers[k] - x.user_powers[k + 1]);
  }
  ev.total_violation = v.total();

  const double eta = rep.energy_efficiency.value_or(0.0);
  ev.objective = eta > 0.0 && std::isfinite(eta) ? std::min(1.0 / eta, large_objective)
                                                 : large_objective;
  return ev;
}

/// Scenario, constraints and precomputed channels; maps normalized genomes to decisions.
class Problem
{
public:
  Problem(Scenario scenario, ConstraintSet constraints)
    : scenario_(std::move(scenario)), constraints_(constraints)
  {
    scenario_.validate();
    constraints_.validate();
    channels_ = build_channels(scenario_.geometry, scenario_.links);
  }

  const Scenario& scenario() const noexcept { return scenario_; }
  const ConstraintSet& constraints() const noexcept { return constraints_; }
  const ChannelSet& channels() const noexcept { return channels_; }
  std::size_t users() const noexcept { return channels_.user_count(); }
  std::size_t elements() const noexcept { return channels_.element_count(); }
  std::size_t dimension() const noexcept { return DecisionVector::dimension(users(), elements()); }

  bool is_phase_gene(std::size_t i) const noexcept
  {
    return i >= users() && i < users() + elements();
  }

  /// Genes in [0, 1]: powers, phases, amplitudes, blocklength, retransmissions.
  DecisionVector decode(std::span<const double> genome) const
  {
    if (genome.size() != dimension())
      throw Error("genome length does not match the problem dimension");
    const auto& c = constraints_;
    auto unit = [](double g) { return std::clamp(g, 0.0, 1.0); };
    DecisionVector x;
    const std::size_t K = users(), N = elements();
    x.user_powers.resize(K);
    x.phases.resize(N);
    x.amplitudes.resize(N);
    for (std::size_t k = 0; k < K; ++k)
      x.user_powers[k] = std::clamp(c.p_min + unit(genome[k]) * (c.p_max - c.p_min), c.p_min, c.p_max);
    for (std::size_t n = 0; n < N; ++n) {
      const double g = genome[K + n];
      x.phases[n] = BeamformConfig::wrap_phase(two_pi * (g - std::floor(g)));
      x.amplitudes[n] = std::min(unit(genome[K + N + n]) * c.beta_max, c.beta_max);
    }
    const double span_nb = static_cast<double>(c.nb_max - c.nb_min);
    x.blocklength = c.nb_min + std::lround(unit(genome[K + 2 * N]) * span_nb);
    const double span_l = static_cast<double>(c.l_max - 1);
    x.retransmissions = 1 + std::lround(unit(genome[K + 2 * N + 1]) * span_l);
    return x;
  }

  Evaluation evaluate(const DecisionVector& x) const
  {
    return evaluate_fitness(x, scenario_, channels_, constraints_);
  }

  MetricsReport metrics(const DecisionVector& x) const
  {
    return evaluate_metrics(scenario_, channels_, BeamformConfig(x.amplitudes, x.phases),
                            PowerAllocation{x.user_powers}, x.blocklength, x.retransmissions);
  }

  /// Phase genes that co-phase the cascade of user `target`.
  std::vector<double> co_phase_genes(std::size_t target) const
  {
    const auto beam = co_phased_uniform(channels_, target, 1.0);
    std::vector<double> genes(elements());
    for (std::size_t n = 0; n < genes.size(); ++n)
      genes[n] = beam.phases()[n] / two_pi;
    return genes;
  }

private:
  Scenario scenario_;
  ConstraintSet constraints_;
  ChannelSet channels_;
};

struct GenerationStats
{
  std::size_t generation = 0;
  /// Objective of the ranked best; +inf while it is infeasible.
  double best_objective = 0.0;
  /// Mean objective over individuals with a defined efficiency (NaN if none).
  double mean_objective = 0.0;
  double feasible_fraction = 0.0;
  double best_violation = 0.0;
};

struct OptimizationResult
{
  DecisionVector best_solution;
  Evaluation best_evaluation;
  double best_eta = 0.0;
  bool feasible = false;
  std::vector<double> fitness_history;
  std::vector<GenerationStats> trace;
  std::size_t generations_run = 0;
};

namespace detail {

inline void evaluate_batch(const Problem& problem, const std::vector<std::vector<double>>& genomes,
                           std::vector<Evaluation>& evals, std::size_t first, std::size_t threads)
{
  const std::size_t count = genomes.size() - first;
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      evals[i] = problem.evaluate(problem.decode(genomes[i]));
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    work(first, genomes.size());
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = first + t * chunk;
    const std::size_t hi = std::min(genomes.size(), lo + chunk);
    if (lo < hi)
      pool.emplace_back(work, lo, hi);
  }
}

inline GenerationStats summarize(std::size_t generation, std::span<const Evaluation> evals,
                                 const Evaluation& best, double tolerance)
{
  GenerationStats s;
  s.generation = generation;
  const bool best_ok = is_feasible(best, tolerance);
  s.best_objective = best_ok ? best.objective : std::numeric_limits<double>::infinity();
  s.best_violation = best.total_violation;
  double sum = 0.0;
  std::size_t defined = 0, feasible = 0;
  for (const auto& e : evals) {
    if (e.objective < large_objective) {
      sum += e.objective;
      ++defined;
    }
    if (is_feasible(e, tolerance))
      ++feasible;
  }
  s.mean_objective = defined ? sum / static_cast<double>(defined)
                             : std::numeric_limits<double>::quiet_NaN();
  s.feasible_fraction = evals.empty() ? 0.0
                                      : static_cast<double>(feasible) /
                                          static_cast<double>(evals.size());
  return s;
}

} // namespace detail

inline OptimizationResult run_ga(const Problem& problem, const GaSettings& settings)
{
  settings.validate();
  const std::size_t dim = problem.dimension();
  const std::size_t pop = settings.population_size;
  const double tol = settings.constraint_tolerance;
  const double mutation_rate =
    settings.mutation_rate > 0.0 ? settings.mutation_rate : 1.0 / static_cast<double>(dim);

  std::mt19937_64 rng(settings.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pop - 1);

  std::vector<std::vector<double>> genomes(pop, std::vector<double>(dim));
  for (auto& g : genomes)
    for (auto& x : g)
      x = unit(rng);
  const auto seeded = static_cast<std::size_t>(
    std::floor(settings.cophase_seed_fraction * static_cast<double>(pop)));
  for (std::size_t i = 0; i < seeded; ++i) {
    const auto genes = problem.co_phase_genes(i % problem.users());
    std::copy(genes.begin(), genes.end(), genomes[i].begin() + static_cast<long>(problem.users()));
  }

  std::vector<Evaluation> evals(pop);
  detail::evaluate_batch(problem, genomes, evals, 0, settings.threads);

  OptimizationResult result;
  auto order = rank(evals, tol);
  std::vector<double> best_genome = genomes[order.front()];
  Evaluation best_eval = evals[order.front()];

  auto consider = [&](const std::vector<double>& genome, const Evaluation& e) {
    if (ranks_before(e, 1, best_eval, 0, tol)) {
      best_genome = genome;
      best_eval = e;
    }
  };

  const bool stall_enabled = settings.function_tolerance >= DBL_EPSILON;
  struct Key
  {
    bool feasible;
    double value;
  };
  std::vector<Key> best_keys;

  std::vector<std::vector<double>> next(pop);
  std::vector<Evaluation> next_evals(pop);
  for (std::size_t gen = 1; gen <= settings.max_generations; ++gen) {
    const double sigma =
      settings.mutation_scale * std::pow(settings.mutation_decay, static_cast<double>(gen - 1));

    auto tournament = [&]() {
      std::size_t winner = pick(rng);
      for (std::size_t t = 1; t < settings.tournament_size; ++t) {
        const std::size_t challenger = pick(rng);
        if (ranks_before(evals[challenger], challenger, evals[winner], winner, tol))
          winner = challenger;
      }
      return winner;
    };
    auto mutate = [&](std::vector<double>& g) {
      for (std::size_t i = 0; i < dim; ++i) {
        if (unit(rng) >= mutation_rate)
          continue;
        double x = g[i] + sigma * normal(rng);
        if (problem.is_phase_gene(i))
          x -= std::floor(x);
        else
          x = std::clamp(x, 0.0, 1.0);
        g[i] = x;
      }
    };

    const std::size_t elites = settings.elite_count;
    for (std::size_t e = 0; e < elites; ++e) {
      next[e] = genomes[order[e]];
      next_evals[e] = evals[order[e]];
    }
    for (std::size_t i = elites; i < pop; i += 2) {
      auto a = genomes[tournament()];
      auto b = genomes[tournament()];
      if (unit(rng) < settings.crossover_rate)
        for (std::size_t j = 0; j < dim; ++j)
          if (unit(rng) < 0.5)
            std::swap(a[j], b[j]);
      mutate(a);
      mutate(b);
      next[i] = std::move(a);
      if (i + 1 < pop)
        next[i + 1] = std::move(b);
    }
    detail::evaluate_batch(problem, next, next_evals, elites, settings.threads);
    genomes.swap(next);
    evals.swap(next_evals);

    order = rank(evals, tol);
    consider(genomes[order.front()], evals[order.front()]);
    result.trace.push_back(detail::summarize(gen, evals, best_eval, tol));
    result.fitness_history.push_back(result.trace.back().best_objective);
    result.generations_run = gen;

    const bool feasible_now = is_feasible(best_eval, tol);
    best_keys.push_back({feasible_now, feasible_now ? best_eval.objective : best_eval.total_violation});
    if (stall_enabled && best_keys.size() > settings.stall_generations) {
      const Key& old = best_keys[best_keys.size() - 1 - settings.stall_generations];
      const Key& now = best_keys.back();
      if (old.feasible == now.feasible) {
        const double scale = std::max(std::abs(old.value), DBL_MIN);
        if ((old.value - now.value) / scale < settings.function_tolerance)
          break;
      }
    }
  }

  result.best_solution = problem.decode(best_genome);
  result.best_evaluation = best_eval;
  result.feasible = is_feasible(best_eval, tol);
  result.best_eta = best_eval.objective < large_objective ? 1.0 / best_eval.objective : 0.0;
  return result;
}

inline OptimizationResult run_ga(const Scenario& scenario, const ConstraintSet& constraints,
                                 const GaSettings& settings)
{
  return run_ga(Problem(scenario, constraints), settings);
}

} // namespace risjam
