#include <risjam/harness.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace risjam;

namespace {

std::string csv_text(const SweepResult& r)
{
  std::ostringstream o;
  write_csv(o, r);
  return o.str();
}

std::string header(const SweepResult& r) { return csv_text(r).substr(0, csv_text(r).find('\n')); }

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

ExperimentConfig small_ga_config()
{
  auto cfg = parse_config("[scenario]\nuser_azimuth_rad = 0.3, -0.9\nuser_elevation_rad = -0.2, -0.6\n"
                          "[traffic]\narrival_rate_pps = 100\nretransmissions = 1\n"
                          "[ga]\npopulation_size = 30\nmax_generations = 25\n");
  return cfg;
}

std::filesystem::path scratch(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("risjam_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST(Csv, GoldenHeaders)
{
  const auto cfg = parse_config("[sweep]\nrel_elements = 4\nsjnr_elements = 4, 16\n"
                                "arrival_rates_pps = 100\nblocklength_max = 24\n");
  EXPECT_EQ(header(sweep_delay_ee(cfg)),
            "arrival_rate_pps,blocklength,retransmissions,frame_duration_s,utilization,"
            "mean_delay_s,reliability,energy_efficiency_bpj");
  const auto rb = sweep_reliability_vs_beta(cfg);
  EXPECT_EQ(header(rb.curve), "elements,beta,sjnr_1,sjnr_2,reliability");
  EXPECT_EQ(header(rb.thresholds), "elements,beta_threshold,grid_threshold,reported_beta");
  EXPECT_EQ(header(sweep_sjnr_vs_n(cfg)), "elements,sjnr,growth_ratio,reported_sjnr");
  EXPECT_EQ(header(mdl_oracle(cfg, 1000)),
            "utilization,arrival_rate_pps,service_time_s,analytic_sojourn_s,simulated_sojourn_s,"
            "relative_error");
  auto opt = small_ga_config();
  opt.ga.max_generations = 2;
  EXPECT_EQ(header(run_optimize(opt).trace),
            "generation,best_objective,mean_objective,feasible_fraction,best_violation");
}

TEST(Csv, RoundTripWithMarkersAndSpecials)
{
  SweepResult r;
  r.marker = "unstable";
  r.columns = {"a", "b", "c"};
  r.rows = {{1.0, std::nullopt, 0.1}, {1e-300, INFINITY, 6.5117929562433298e-4},
            {-0.0, 123456789.123456789, std::nullopt}};
  std::istringstream in(csv_text(r));
  const auto back = read_csv(in, "unstable");
  EXPECT_TRUE(r.same_data(back));
  EXPECT_EQ(csv_text(back), csv_text(r));
}

TEST(Csv, RoundTripEverySweep)
{
  const auto cfg = parse_config("[sweep]\nrel_elements = 4, 100\nbeta_points = 20\n");
  for (const auto& r : {sweep_delay_ee(cfg), sweep_reliability_vs_beta(cfg).curve,
                        sweep_reliability_vs_beta(cfg).thresholds, sweep_sjnr_vs_n(cfg)}) {
    std::istringstream in(csv_text(r));
    EXPECT_TRUE(r.same_data(read_csv(in, r.marker))) << r.name;
  }
}

TEST(Csv, RejectsMalformed)
{
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_csv(ragged), Error);
  std::istringstream junk("a\nxyz\n");
  EXPECT_THROW(read_csv(junk), Error);
}

TEST(DelayEe, FigureOperatingPoints)
{
  const auto res = sweep_delay_ee(parse_config(std::string{}));
  bool saw100 = false, saw1300 = false;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (*res.at(i, "blocklength") != 108.0)
      continue;
    const double rate = *res.at(i, "arrival_rate_pps");
    if (rate == 100.0) {
      EXPECT_NEAR(*res.at(i, "mean_delay_s"), 6.51e-4, 0.005 * 6.51e-4);
      saw100 = true;
    }
    if (rate == 1300.0) {
      EXPECT_NEAR(*res.at(i, "mean_delay_s"), 2.1e-3, 0.025 * 2.1e-3);
      saw1300 = true;
    }
  }
  EXPECT_TRUE(saw100 && saw1300);
}

TEST(DelayEe, SortedAndUnstableMarked)
{
  const auto cfg = parse_config("[sweep]\narrival_rates_pps = 1300, 100, 2500\n"
                                "delay_ee_retransmissions = 1\n");
  const auto res = sweep_delay_ee(cfg);
  std::size_t unstable = 0;
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const auto prev = std::make_pair(*res.at(i - 1, "arrival_rate_pps"), *res.at(i - 1, "blocklength"));
    const auto cur = std::make_pair(*res.at(i, "arrival_rate_pps"), *res.at(i, "blocklength"));
    EXPECT_LT(prev, cur);
  }
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const bool stable = *res.at(i, "utilization") < 1.0;
    EXPECT_EQ(res.at(i, "mean_delay_s").has_value(), stable);
    EXPECT_EQ(res.at(i, "energy_efficiency_bpj").has_value(), stable);
    unstable += !stable;
  }
  EXPECT_GT(unstable, 0u);
  EXPECT_NE(csv_text(res).find(",unstable,"), std::string::npos);
}

TEST(RelBeta, MonotoneAndZeroAtZeroAmplitude)
{
  const auto res = sweep_reliability_vs_beta(parse_config(std::string{}));
  double prev_n = -1.0, prev_r = 0.0;
  for (std::size_t i = 0; i < res.curve.rows.size(); ++i) {
    const double n = *res.curve.at(i, "elements");
    const double r = *res.curve.at(i, "reliability");
    if (n != prev_n) {
      EXPECT_EQ(*res.curve.at(i, "beta"), 0.0);
      EXPECT_EQ(r, 0.0);
    } else {
      EXPECT_GE(r, prev_r) << "N=" << n << " beta=" << *res.curve.at(i, "beta");
    }
    prev_n = n;
    prev_r = r;
  }
}

TEST(RelBeta, ThresholdOrderingAndConsistency)
{
  const auto cfg = parse_config(std::string{});
  const auto res = sweep_reliability_vs_beta(cfg);
  ASSERT_EQ(res.thresholds.rows.size(), 4u);
  std::vector<double> beta;
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_TRUE(res.thresholds.at(i, "beta_threshold"));
    beta.push_back(*res.thresholds.at(i, "beta_threshold"));
    // the first grid point that qualifies lies at or above the exact threshold
    EXPECT_GE(*res.thresholds.at(i, "grid_threshold"), beta.back());
  }
  EXPECT_GT(beta[0], beta[1]);
  EXPECT_GT(beta[1], beta[2]);
  EXPECT_EQ(*res.thresholds.at(0, "reported_beta"), 43.7);
  EXPECT_EQ(*res.thresholds.at(2, "reported_beta"), 2.1);
  EXPECT_FALSE(res.thresholds.at(1, "reported_beta"));
}

TEST(RelBeta, UnreachableThresholdIsMarked)
{
  const auto cfg = parse_config("[sweep]\nrel_elements = 4\nrel_blocklength = 108\n");
  const auto res = sweep_reliability_vs_beta(cfg);
  EXPECT_FALSE(res.thresholds.at(0, "beta_threshold"));
  EXPECT_FALSE(res.thresholds.at(0, "grid_threshold"));
}

TEST(SjnrN, MonotoneWithPlateau)
{
  const auto res = sweep_sjnr_vs_n(parse_config(std::string{}));
  ASSERT_EQ(res.rows.size(), 9u);
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    EXPECT_GE(*res.at(i, "sjnr"), *res.at(i - 1, "sjnr"));
  auto at_n = [&](double n) {
    for (std::size_t i = 0; i < res.rows.size(); ++i)
      if (*res.at(i, "elements") == n)
        return *res.at(i, "sjnr");
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double early = at_n(100) / at_n(4) - 1.0;
  const double late = at_n(900) / at_n(400) - 1.0;
  EXPECT_LT(late, early);
  EXPECT_FALSE(res.at(0, "growth_ratio"));
  EXPECT_NEAR(*res.at(1, "growth_ratio"), *res.at(1, "sjnr") / *res.at(0, "sjnr"), 1e-15);
}

TEST(SjnrN, FrozenPolicyValues)
{
  // direct evaluation of the constant-total co-phased policy
  const auto res = sweep_sjnr_vs_n(parse_config("[sweep]\nsjnr_elements = 4, 400\n"));
  EXPECT_NEAR(*res.at(0, "sjnr"), 0.2904, 5e-4);
  EXPECT_NEAR(*res.at(1, "sjnr"), 1.5411, 5e-4);
}

TEST(SjnrN, OptimizerPerPoint)
{
  const auto cfg = parse_config("[sweep]\nsjnr_elements = 1, 4\nsjnr_use_ga = true\n"
                                "[ga]\npopulation_size = 20\nmax_generations = 5\n");
  const auto res = sweep_sjnr_vs_n(cfg);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_GE(*res.at(1, "sjnr"), 0.0);
}

TEST(MdlOracle, SmallRunAgrees)
{
  const auto res = mdl_oracle(parse_config(std::string{}), 200'000);
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    EXPECT_LT(*res.at(i, "relative_error"), 0.05);
}

TEST(Optimize, TraceAndRecordFiles)
{
  const auto dir = scratch("opt");
  const auto cfg = small_ga_config();
  const auto out = run_optimize(cfg, dir);
  EXPECT_EQ(out.trace.rows.size(), cfg.ga.max_generations);
  for (std::size_t i = 1; i < out.trace.rows.size(); ++i)
    EXPECT_LE(*out.trace.at(i, "best_objective"), *out.trace.at(i - 1, "best_objective"));

  std::ifstream rec(dir / "solution.ini");
  EXPECT_EQ(read_record(rec), out.record);
  std::ifstream csv(dir / "convergence.csv");
  EXPECT_TRUE(out.trace.same_data(read_csv(csv)));
  const auto meta = slurp(dir / "convergence.csv.meta");
  EXPECT_NE(meta.find("config_hash = " + config_hash(cfg)), std::string::npos);
  EXPECT_NE(meta.find("seed = 1"), std::string::npos);
  EXPECT_NE(meta.find("tool_version = "), std::string::npos);
  EXPECT_NE(meta.find("timestamp = "), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Optimize, SameSeedByteIdentical)
{
  const auto a = scratch("opt_a"), b = scratch("opt_b");
  run_optimize(small_ga_config(), a);
  run_optimize(small_ga_config(), b);
  EXPECT_EQ(slurp(a / "convergence.csv"), slurp(b / "convergence.csv"));
  EXPECT_EQ(slurp(a / "solution.ini"), slurp(b / "solution.ini"));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Optimize, RecordRoundTripInfeasible)
{
  auto cfg = parse_config("[ga]\npopulation_size = 10\nmax_generations = 3\n");
  const auto out = run_optimize(cfg);
  EXPECT_FALSE(out.record.feasible);
  std::stringstream io;
  write_record(io, out.record);
  EXPECT_EQ(read_record(io), out.record);
}

TEST(Sweeps, WrittenFilesReproducible)
{
  const auto a = scratch("sw_a"), b = scratch("sw_b");
  const auto cfg = parse_config(std::string{});
  write_sweep(a, sweep_sjnr_vs_n(cfg));
  write_sweep(b, sweep_sjnr_vs_n(cfg));
  EXPECT_EQ(slurp(a / "sjnr_n.csv"), slurp(b / "sjnr_n.csv"));
  const auto csv = slurp(a / "sjnr_n.csv");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}
