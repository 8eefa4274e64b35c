#pragma once

// Experiment sweeps, CSV persistence and solution records.
//
// CSV: header row first, ',' separator, '.' decimal point, '\n' line ends,
// values printed with 17 significant digits. A cell without a value holds the
// result's marker ("unstable" for the delay sweep, "NA" elsewhere). Run
// metadata goes to a sidecar "<file>.meta" so that the CSV bytes depend only
// on (config, seed).

#include <risjam/config.hpp>
#include <risjam/optimizer.hpp>
#include <risjam/queue_sim.hpp>
#include <risjam/scenario.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace risjam {

using Cell = std::optional<double>;

struct SweepResult
{
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string marker = "NA";
  std::map<std::string, std::string> metadata;

  /// Column index by name; throws if absent.
  std::size_t column(const std::string& col) const
  {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end())
      throw Error("no column named " + col);
    return static_cast<std::size_t>(it - columns.begin());
  }

  Cell at(std::size_t row, const std::string& col) const { return rows.at(row).at(column(col)); }

  /// Equality of everything the CSV carries.
  bool same_data(const SweepResult& o) const
  {
    if (columns != o.columns || rows.size() != o.rows.size())
      return false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != o.rows[r].size())
        return false;
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        const auto& a = rows[r][c];
        const auto& b = o.rows[r][c];
        if (a.has_value() != b.has_value())
          return false;
        if (a && !(*a == *b || (std::isnan(*a) && std::isnan(*b))))
          return false;
      }
    }
    return true;
  }
};

inline void write_csv(std::ostream& out, const SweepResult& res)
{
  for (std::size_t c = 0; c < res.columns.size(); ++c)
    out << (c ? "," : "") << res.columns[c];
  out << '\n';
  for (const auto& row : res.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << (row[c] ? detail::format_real(*row[c]) : res.marker);
    out << '\n';
  }
}

inline SweepResult read_csv(std::istream& in, const std::string& marker = "NA")
{
  SweepResult res;
  res.marker = marker;
  std::string line;
  if (!std::getline(in, line))
    throw Error("empty CSV");
  res.columns = detail::split_list(line);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto cells = detail::split_list(line);
    if (cells.size() != res.columns.size())
      throw Error("CSV row width does not match the header");
    std::vector<Cell> row;
    for (const auto& cell : cells) {
      if (cell == marker) {
        row.push_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || end != cell.data() + cell.size())
        throw Error("unparseable CSV cell '" + cell + "'");
      row.push_back(v);
    }
    res.rows.push_back(std::move(row));
  }
  return res;
}

inline std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void stamp(SweepResult& res, const ExperimentConfig& cfg)
{
  res.metadata["kind"] = res.name;
  res.metadata["config_hash"] = config_hash(cfg);
  res.metadata["seed"] = std::to_string(cfg.seed);
  res.metadata["tool_version"] = tool_version;
  res.metadata["timestamp"] = utc_timestamp();
}

/// Writes <dir>/<name>.csv and <dir>/<name>.csv.meta; returns the CSV path.
inline std::filesystem::path write_sweep(const std::filesystem::path& dir, const SweepResult& res)
{
  std::filesystem::create_directories(dir);
  const auto csv = dir / (res.name + ".csv");
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out)
      throw Error("cannot write " + csv.string());
    write_csv(out, res);
  }
  std::ofstream meta(csv.string() + ".meta", std::ios::binary);
  meta << "[run]\n";
  for (const auto& [k, v] : res.metadata)
    meta << k << " = " << v << "\n";
  return csv;
}

namespace detail {

inline std::vector<double> beta_grid(const SweepSettings& sw)
{
  std::vector<double> grid{0.0};
  const double n = static_cast<double>(sw.beta_points - 1);
  for (std::size_t i = 0; i < sw.beta_points; ++i) {
    const double t = static_cast<double>(i) / n;
    const double b = sw.beta_log
                       ? std::exp(std::log(sw.beta_min) + t * (std::log(sw.beta_max) - std::log(sw.beta_min)))
                       : sw.beta_min + t * (sw.beta_max - sw.beta_min);
    if (b > grid.back())
      grid.push_back(b);
  }
  grid.back() = std::max(grid.back(), sw.beta_max);
  return grid;
}

inline Scenario with_elements(const Scenario& base, std::size_t elements)
{
  Scenario s = base;
  s.geometry = RisGeometry::square(elements, base.geometry.spacing_h(), base.geometry.spacing_v(),
                                   base.geometry.carrier_freq());
  return s;
}

inline std::optional<double> reported_beta(std::size_t elements)
{
  if (elements == 4)
    return 43.7;
  if (elements == 400)
    return 2.1;
  return std::nullopt;
}

inline std::optional<double> reported_sjnr(std::size_t elements)
{
  if (elements == 4)
    return 0.61;
  if (elements == 400)
    return 4.47;
  return std::nullopt;
}

} // namespace detail

/// Mean delay and energy efficiency over (arrival rate x blocklength).
inline SweepResult sweep_delay_ee(const ExperimentConfig& cfg)
{
  const auto& s = cfg.scenario;
  const auto& sw = cfg.sweep;
  const auto ch = build_channels(s.geometry, s.links);
  const auto beam = co_phased_uniform(ch, sw.delay_ee_cophase_user, sw.policy_beta);

  SweepResult res;
  res.name = "delay_ee";
  res.marker = "unstable";
  res.columns = {"arrival_rate_pps", "blocklength", "retransmissions", "frame_duration_s",
                 "utilization",      "mean_delay_s", "reliability",   "energy_efficiency_bpj"};

  auto rates = sw.arrival_rates;
  std::sort(rates.begin(), rates.end());
  for (double rate : rates) {
    for (long nb = sw.blocklength_min; nb <= sw.blocklength_max; nb += sw.blocklength_step) {
      FrameParams fp = s.frame;
      fp.blocklength = nb;
      const TrafficParams tp{std::vector<double>(s.user_count(), rate), sw.delay_ee_retransmissions};
      const auto link = evaluate_link(ch, beam, s.powers, s.links.jammer_power, s.noise,
                                      FblCode(nb, s.payload_bits), tp.retransmissions);
      const double rho = utilization(fp, tp, 0);
      Cell delay, eta;
      if (rho < 1.0) {
        std::vector<double> delays(s.user_count());
        for (std::size_t k = 0; k < delays.size(); ++k)
          delays[k] = mean_delay(fp, tp, k);
        delay = delays.front();
        eta = energy_efficiency(s.payload_bits, link.reliability, s.powers.user_powers, delays);
      }
      res.rows.push_back({rate, static_cast<double>(nb), static_cast<double>(tp.retransmissions),
                          frame_duration(fp), rho, delay, link.reliability.front(), eta});
    }
  }
  stamp(res, cfg);
  return res;
}

struct RelBetaSweep
{
  SweepResult curve;
  SweepResult thresholds;
};

/// Smallest uniform amplitude in [0, beta_hi] whose co-phased reliability
/// reaches `target`, by bisection; nullopt if beta_hi does not reach it.
inline std::optional<double> beta_threshold(const Scenario& s, const ChannelSet& ch,
                                            std::size_t cophase_user, long blocklength,
                                            double target, double beta_hi)
{
  const FblCode code(blocklength, s.payload_bits);
  auto rel = [&](double beta) {
    const auto beam = co_phased_uniform(ch, cophase_user, beta);
    return evaluate_link(ch, beam, s.powers, s.links.jammer_power, s.noise, code,
                         s.traffic.retransmissions)
      .reliability.front();
  };
  if (rel(beta_hi) < target)
    return std::nullopt;
  double lo = 0.0, hi = beta_hi;
  if (rel(lo) >= target)
    return 0.0;
  for (int i = 0; i < 2000 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rel(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

/// Reliability versus uniform amplitude for several element counts.
inline RelBetaSweep sweep_reliability_vs_beta(const ExperimentConfig& cfg)
{
  const auto& sw = cfg.sweep;
  RelBetaSweep out;
  out.curve.name = "rel_beta";
  out.curve.columns = {"elements", "beta"};
  for (std::size_t k = 0; k < cfg.scenario.user_count(); ++k)
    out.curve.columns.push_back("sjnr_" + std::to_string(k + 1));
  out.curve.columns.push_back("reliability");
  out.thresholds.name = "rel_beta_thresholds";
  out.thresholds.columns = {"elements", "beta_threshold", "grid_threshold", "reported_beta"};

  const auto grid = detail::beta_grid(sw);
  auto elements = sw.rel_elements;
  std::sort(elements.begin(), elements.end());
  for (std::size_t n : elements) {
    const auto s = detail::with_elements(cfg.scenario, n);
    const auto ch = build_channels(s.geometry, s.links);
    const FblCode code(sw.rel_blocklength, s.payload_bits);
    Cell grid_hit;
    for (double beta : grid) {
      const auto beam = co_phased_uniform(ch, sw.rel_cophase_user, beta);
      const auto link = evaluate_link(ch, beam, s.powers, s.links.jammer_power, s.noise, code,
                                      s.traffic.retransmissions);
      std::vector<Cell> row{static_cast<double>(n), beta};
      for (double g : link.sjnr)
        row.emplace_back(g);
      row.emplace_back(link.reliability.front());
      out.curve.rows.push_back(std::move(row));
      if (!grid_hit && link.reliability.front() >= cfg.constraints.rel_thr)
        grid_hit = beta;
    }
    const auto exact = beta_threshold(s, ch, sw.rel_cophase_user, sw.rel_blocklength,
                                      cfg.constraints.rel_thr, grid.back());
    out.thresholds.rows.push_back(
      {static_cast<double>(n), exact, grid_hit, detail::reported_beta(n)});
  }
  stamp(out.curve, cfg);
  stamp(out.thresholds, cfg);
  return out;
}

/// SJNR of user 1 versus element count, under the fixed co-phased policy
/// with constant total amplification (beta_n = beta_total / N), or under the
/// optimizer when sjnr_use_ga is set.
inline SweepResult sweep_sjnr_vs_n(const ExperimentConfig& cfg)
{
  const auto& sw = cfg.sweep;
  SweepResult res;
  res.name = "sjnr_n";
  res.columns = {"elements", "sjnr", "growth_ratio", "reported_sjnr"};

  auto elements = sw.sjnr_elements;
  std::sort(elements.begin(), elements.end());
  Cell previous;
  for (std::size_t n : elements) {
    const auto s = detail::with_elements(cfg.scenario, n);
    double gamma = 0.0;
    if (sw.sjnr_use_ga) {
      const Problem problem(s, cfg.constraints);
      auto ga = cfg.ga;
      ga.rng_seed = cfg.seed;
      const auto result = run_ga(problem, ga);
      gamma = problem.metrics(result.best_solution).link.sjnr.front();
    } else {
      const auto ch = build_channels(s.geometry, s.links);
      const auto beam =
        co_phased_uniform(ch, sw.sjnr_cophase_user, sw.sjnr_beta_total / static_cast<double>(n));
      gamma = sjnr_all(ch, beam, s.powers, s.links.jammer_power, s.noise).front();
    }
    Cell growth;
    if (previous && *previous > 0.0)
      growth = gamma / *previous;
    res.rows.push_back({static_cast<double>(n), gamma, growth, detail::reported_sjnr(n)});
    previous = gamma;
  }
  stamp(res, cfg);
  return res;
}

/// Analytic M/D/1 sojourn time against a discrete-event run at several loads.
/// Service time is the configured frame with the delay sweep's repetition count.
inline SweepResult mdl_oracle(const ExperimentConfig& cfg, std::uint64_t arrivals = 1'000'000,
                              std::vector<double> loads = {0.1, 0.3, 0.5, 0.8})
{
  const TrafficParams tp{{1.0}, cfg.sweep.delay_ee_retransmissions};
  const double service = service_time(cfg.scenario.frame, tp);
  SweepResult res;
  res.name = "mdl_oracle";
  res.columns = {"utilization", "arrival_rate_pps", "service_time_s", "analytic_sojourn_s",
                 "simulated_sojourn_s", "relative_error"};
  std::sort(loads.begin(), loads.end());
  for (double rho : loads) {
    const double rate = rho / service;
    const double analytic = md1_mean_sojourn(service, rate);
    const auto sim = simulate_md1(rate, service, arrivals, cfg.seed);
    res.rows.push_back({rho, rate, service, analytic, sim.mean_sojourn,
                        std::abs(sim.mean_sojourn - analytic) / analytic});
  }
  stamp(res, cfg);
  return res;
}

inline SweepResult convergence_trace(const OptimizationResult& r)
{
  SweepResult res;
  res.name = "convergence";
  res.columns = {"generation", "best_objective", "mean_objective", "feasible_fraction",
                 "best_violation"};
  for (const auto& g : r.trace)
    res.rows.push_back({static_cast<double>(g.generation), g.best_objective, g.mean_objective,
                        g.feasible_fraction, g.best_violation});
  return res;
}

/// Decision variables, achieved metrics and feasibility of one optimizer run.
struct SolutionRecord
{
  DecisionVector solution;
  std::vector<double> sjnr;
  std::vector<double> bler;
  double replica_success = 0.0;
  std::vector<double> reliability;
  std::vector<double> utilization;
  std::vector<double> mean_delay;
  double energy_efficiency = 0.0;
  double objective = 0.0;
  bool feasible = false;
  ConstraintViolations violations;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t generations = 0;

  bool operator==(const SolutionRecord&) const = default;
};

inline SolutionRecord make_record(const Problem& problem, const OptimizationResult& r,
                                  const ExperimentConfig& cfg)
{
  const auto m = problem.metrics(r.best_solution);
  SolutionRecord rec;
  rec.solution = r.best_solution;
  rec.sjnr = m.link.sjnr;
  rec.bler = m.link.bler;
  rec.replica_success = m.link.replica_success;
  rec.reliability = m.link.reliability;
  rec.utilization = m.utilization;
  rec.mean_delay = m.mean_delay;
  rec.energy_efficiency = m.energy_efficiency.value_or(0.0);
  rec.objective = r.best_evaluation.objective;
  rec.feasible = r.feasible;
  rec.violations = r.best_evaluation.violations;
  rec.seed = cfg.seed;
  rec.config_hash = config_hash(cfg);
  rec.generations = r.generations_run;
  return rec;
}

inline void write_record(std::ostream& out, const SolutionRecord& rec)
{
  std::function<std::string(const double&)> real = [](const double& v) {
    return detail::format_real(v);
  };
  auto list = [&](const std::vector<double>& v) { return detail::format_list(v, real); };
  const auto& x = rec.solution;
  out << "[solution]\n"
      << "user_power_w = " << list(x.user_powers) << "\n"
      << "phases_rad = " << list(x.phases) << "\n"
      << "amplitudes = " << list(x.amplitudes) << "\n"
      << "blocklength = " << x.blocklength << "\n"
      << "retransmissions = " << x.retransmissions << "\n\n"
      << "[metrics]\n"
      << "sjnr = " << list(rec.sjnr) << "\n"
      << "bler = " << list(rec.bler) << "\n"
      << "replica_success = " << real(rec.replica_success) << "\n"
      << "reliability = " << list(rec.reliability) << "\n"
      << "utilization = " << list(rec.utilization) << "\n"
      << "mean_delay_s = " << list(rec.mean_delay) << "\n"
      << "energy_efficiency_bpj = " << real(rec.energy_efficiency) << "\n"
      << "objective = " << real(rec.objective) << "\n"
      << "feasible = " << (rec.feasible ? "true" : "false") << "\n\n"
      << "[violations]\n"
      << "delay = " << list(rec.violations.delay) << "\n"
      << "reliability = " << list(rec.violations.reliability) << "\n"
      << "stability = " << list(rec.violations.stability) << "\n"
      << "ordering = " << list(rec.violations.ordering) << "\n\n"
      << "[run]\n"
      << "seed = " << rec.seed << "\n"
      << "config_hash = " << rec.config_hash << "\n"
      << "generations = " << rec.generations << "\n";
}

inline SolutionRecord read_record(std::istream& in)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(std::string("malformed solution record: ") + e.what());
  }
  auto get = [&](const std::string& path) {
    const auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!v)
      throw Error("solution record lacks " + path);
    return *v;
  };
  auto list = [&](const std::string& path) {
    const auto raw = get(path);
    std::vector<double> out;
    if (detail::trim(raw).empty())
      return out;
    for (const auto& item : detail::split_list(raw)) {
      double v = 0.0;
      const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || end != item.data() + item.size())
        throw Error("bad number '" + item + "' in " + path);
      out.push_back(v);
    }
    return out;
  };
  auto real = [&](const std::string& path) {
    const auto v = list(path);
    if (v.size() != 1)
      throw Error(path + " must hold one number");
    return v.front();
  };
  SolutionRecord rec;
  rec.solution.user_powers = list("solution.user_power_w");
  rec.solution.phases = list("solution.phases_rad");
  rec.solution.amplitudes = list("solution.amplitudes");
  rec.solution.blocklength = detail::parse_integer("blocklength", get("solution.blocklength"));
  rec.solution.retransmissions =
    detail::parse_integer("retransmissions", get("solution.retransmissions"));
  rec.sjnr = list("metrics.sjnr");
  rec.bler = list("metrics.bler");
  rec.replica_success = real("metrics.replica_success");
  rec.reliability = list("metrics.reliability");
  rec.utilization = list("metrics.utilization");
  rec.mean_delay = list("metrics.mean_delay_s");
  rec.energy_efficiency = real("metrics.energy_efficiency_bpj");
  rec.objective = real("metrics.objective");
  rec.feasible = detail::parse_bool("feasible", get("metrics.feasible"));
  rec.violations.delay = list("violations.delay");
  rec.violations.reliability = list("violations.reliability");
  rec.violations.stability = list("violations.stability");
  rec.violations.ordering = list("violations.ordering");
  rec.seed = std::stoull(get("run.seed"));
  rec.config_hash = detail::trim(get("run.config_hash"));
  rec.generations = detail::parse_count("generations", get("run.generations"));
  return rec;
}

struct OptimizeOutput
{
  OptimizationResult result;
  SolutionRecord record;
  SweepResult trace;
};

/// Runs the optimizer on the configured scenario and writes
/// convergence.csv (+ .meta) and solution.ini into `dir`.
inline OptimizeOutput run_optimize(const ExperimentConfig& cfg,
                                   const std::optional<std::filesystem::path>& dir = std::nullopt)
{
  const Problem problem(cfg.scenario, cfg.constraints);
  auto ga = cfg.ga;
  ga.rng_seed = cfg.seed;
  OptimizeOutput out;
  out.result = run_ga(problem, ga);
  out.record = make_record(problem, out.result, cfg);
  out.trace = convergence_trace(out.result);
  stamp(out.trace, cfg);
  if (dir) {
    write_sweep(*dir, out.trace);
    std::ofstream rec(*dir / "solution.ini", std::ios::binary);
    if (!rec)
      throw Error("cannot write solution record");
    write_record(rec, out.record);
  }
  return out;
}

} // namespace risjam
