// Command-line front end. Exit codes: 0 ok, 1 config/usage error,
// 2 infeasible or unstable result, 3 internal error.

#include <risjam/harness.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum Exit : int { ok = 0, config_error = 1, infeasible = 2, internal = 3 };

struct Globals
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string preset = "desk";
};

risjam::ExperimentConfig load(const Globals& g)
{
  const auto preset = g.preset == "paper" ? risjam::Preset::paper : risjam::Preset::desk;
  auto cfg = g.config_path.empty() ? risjam::parse_config(std::string{}, preset)
                                   : risjam::load_config(g.config_path, preset);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.ga.rng_seed = *g.seed;
  }
  if (g.out)
    cfg.output_dir = *g.out;
  return cfg;
}

void echo(const risjam::ExperimentConfig& cfg)
{
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream(std::filesystem::path(cfg.output_dir) / "config.ini", std::ios::binary)
    << risjam::echo_config(cfg);
}

void report(const std::filesystem::path& p) { std::cout << "wrote " << p.string() << "\n"; }

int cmd_optimize(const risjam::ExperimentConfig& cfg)
{
  constexpr std::size_t desk_element_cap = 64;
  if (cfg.preset == risjam::Preset::desk && cfg.scenario.geometry.element_count() > desk_element_cap)
    throw risjam::ConfigError(risjam::ConfigErrorKind::invalid_value,
                              "the desk preset optimizes at most 64 elements; use --preset paper");
  echo(cfg);
  const auto out = risjam::run_optimize(cfg, std::filesystem::path(cfg.output_dir));
  const auto& r = out.record;
  std::printf("generations %zu  feasible %s  objective %.6g  eta %.6g bit/J\n", r.generations,
              r.feasible ? "yes" : "no", r.objective, r.energy_efficiency);
  report(std::filesystem::path(cfg.output_dir) / "convergence.csv");
  report(std::filesystem::path(cfg.output_dir) / "solution.ini");
  return r.feasible ? ok : infeasible;
}

int cmd_delay_ee(const risjam::ExperimentConfig& cfg)
{
  echo(cfg);
  const auto res = risjam::sweep_delay_ee(cfg);
  report(risjam::write_sweep(cfg.output_dir, res));
  const auto col = res.column("mean_delay_s");
  for (const auto& row : res.rows)
    if (row[col])
      return ok;
  std::cerr << "every grid point is unstable\n";
  return infeasible;
}

int cmd_rel_beta(const risjam::ExperimentConfig& cfg)
{
  echo(cfg);
  const auto res = risjam::sweep_reliability_vs_beta(cfg);
  report(risjam::write_sweep(cfg.output_dir, res.curve));
  report(risjam::write_sweep(cfg.output_dir, res.thresholds));
  for (const auto& row : res.thresholds.rows)
    std::printf("N=%-5.0f beta*=%s\n", *row[0],
                row[1] ? risjam::detail::format_real(*row[1]).c_str() : "not reached");
  return ok;
}

int cmd_sjnr_n(const risjam::ExperimentConfig& cfg)
{
  echo(cfg);
  const auto res = risjam::sweep_sjnr_vs_n(cfg);
  report(risjam::write_sweep(cfg.output_dir, res));
  return ok;
}

int cmd_mdl(const risjam::ExperimentConfig& cfg, std::uint64_t arrivals, double tolerance)
{
  echo(cfg);
  const auto res = risjam::mdl_oracle(cfg, arrivals);
  report(risjam::write_sweep(cfg.output_dir, res));
  bool pass = true;
  for (const auto& row : res.rows) {
    const double err = *row[5];
    std::printf("rho=%.2f analytic=%.6e simulated=%.6e rel_err=%.3e\n", *row[0], *row[3], *row[4],
                err);
    pass = pass && err <= tolerance;
  }
  return pass ? ok : infeasible;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Active-RIS NOMA jamming simulator and optimizer"};
  app.set_version_flag("--version", std::string(risjam::tool_version));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "INI configuration file");
  app.add_option("--seed", g.seed, "random seed (overrides [ga] seed)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--preset", g.preset, "GA scale preset")
    ->check(CLI::IsMember({"desk", "paper"}));

  auto* optimize = app.add_subcommand("optimize", "run the genetic algorithm on the scenario");
  auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->require_subcommand(1);
  auto* delay_ee = sweep->add_subcommand("delay-ee", "delay and energy efficiency vs blocklength");
  auto* rel_beta = sweep->add_subcommand("rel-beta", "reliability vs RIS amplitude");
  auto* sjnr_n = sweep->add_subcommand("sjnr-n", "user-1 SJNR vs element count");
  auto* mdl = app.add_subcommand("mdl-oracle", "M/D/1 delay formula vs discrete-event simulation");
  std::uint64_t arrivals = 1'000'000;
  double tolerance = 0.02;
  mdl->add_option("--arrivals", arrivals, "simulated arrivals per load")->check(CLI::PositiveNumber);
  mdl->add_option("--tolerance", tolerance, "relative error accepted");
  for (auto* sub : {delay_ee, rel_beta, sjnr_n})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    const auto cfg = load(g);
    if (*optimize)
      return cmd_optimize(cfg);
    if (*delay_ee)
      return cmd_delay_ee(cfg);
    if (*rel_beta)
      return cmd_rel_beta(cfg);
    if (*sjnr_n)
      return cmd_sjnr_n(cfg);
    if (*mdl)
      return cmd_mdl(cfg, arrivals, tolerance);
    return internal;
  } catch (const risjam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const risjam::UnstableQueueError& e) {
    std::cerr << "unstable: " << e.what() << "\n";
    return infeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
}
