#include <risjam/queue_sim.hpp>
#include <risjam/traffic_metrics.hpp>

#include <gtest/gtest.h>

#include <vector>

using namespace risjam;

namespace {

const FrameParams fig3{30e-6, 180e3, 108};

TrafficParams single(double rate, long reps = 1) { return {{rate}, reps}; }

} // namespace

TEST(Frame, Duration)
{
  EXPECT_NEAR(frame_duration(fig3), 6.3e-4, 1e-18);
  EXPECT_DOUBLE_EQ(frame_duration({0.0, 250.0, 250}), 1.0);
  EXPECT_DOUBLE_EQ(frame_duration({30e-6, 180e3, 1}), 30e-6 + 1.0 / 180e3);
  EXPECT_THROW(frame_duration({30e-6, 0.0, 108}), Error);
  EXPECT_THROW(frame_duration({30e-6, 180e3, 0}), Error);
}

TEST(Traffic, Utilization)
{
  EXPECT_NEAR(utilization(fig3, single(100.0), 0), 0.063, 1e-15);
  EXPECT_NEAR(utilization(fig3, single(1300.0), 0), 0.819, 1e-15);
  EXPECT_NEAR(utilization(fig3, single(100.0, 10), 0), 0.63, 1e-15);
  EXPECT_LT(utilization(fig3, single(1e-9), 0), 1e-12);
  EXPECT_THROW(utilization(fig3, single(100.0), 1), Error);
  EXPECT_THROW(utilization(fig3, single(-1.0), 0), Error);
  EXPECT_THROW(utilization(fig3, single(100.0, 0), 0), Error);
}

TEST(Traffic, MeanDelayFrozen)
{
  EXPECT_NEAR(mean_delay(fig3, single(100.0), 0), 6.5117929562433298e-4, 1e-12 * 6.5e-4);
  EXPECT_NEAR(mean_delay(fig3, single(1300.0), 0), 2.0553314917127072e-3, 1e-12 * 2.1e-3);
}

TEST(Traffic, MeanDelayEmptyQueueLimit)
{
  EXPECT_NEAR(mean_delay(fig3, single(1e-9, 3), 0), 3.0 * 6.3e-4, 1e-11 * 3.0 * 6.3e-4);
}

TEST(Traffic, UnstableQueueThrows)
{
  try {
    mean_delay(fig3, single(1.0001 / 6.3e-4), 0);
    FAIL() << "expected an unstable queue";
  } catch (const UnstableQueueError& e) {
    EXPECT_GT(e.utilization(), 1.0);
  }
  EXPECT_THROW(mean_delay(fig3, single(100.0, 20), 0), UnstableQueueError);
}

TEST(Traffic, DelayIncreasesWithLoad)
{
  double prev = 0.0;
  for (double rate = 50.0; rate < 1580.0; rate += 50.0) {
    const double d = mean_delay(fig3, single(rate), 0);
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(EnergyEfficiency, FrozenExample)
{
  const std::vector<double> rel{1.0, 1.0}, p{2.45e-3, 2.45e-3}, tau{6.51e-4, 6.51e-4};
  EXPECT_NEAR(energy_efficiency(256, rel, p, tau), 160506598.95294523, 1e-6);
}

TEST(EnergyEfficiency, ZeroReliabilityAndHomogeneity)
{
  const std::vector<double> zero{0.0, 0.0}, rel{0.9, 0.8}, p{1e-3, 2e-3}, p2{2e-3, 4e-3},
    tau{1e-3, 2e-3};
  EXPECT_EQ(energy_efficiency(256, zero, p, tau), 0.0);
  EXPECT_NEAR(energy_efficiency(256, rel, p2, tau), 0.5 * energy_efficiency(256, rel, p, tau),
              1e-6);
}

TEST(EnergyEfficiency, RejectsBadInput)
{
  const std::vector<double> one{1.0}, two{1.0, 1.0}, inf{INFINITY}, zero{0.0};
  EXPECT_THROW(energy_efficiency(256, one, two, one), Error);
  EXPECT_THROW(energy_efficiency(256, one, one, inf), Error);
  EXPECT_THROW(energy_efficiency(256, one, zero, one), Error);
}

TEST(QueueSim, MatchesFormulaAtModerateLoad)
{
  const double service = 6.3e-4;
  for (double rho : {0.1, 0.5, 0.8}) {
    const double rate = rho / service;
    const auto sim = simulate_md1(rate, service, 400'000, 42);
    const double ref = md1_mean_sojourn(service, rate);
    EXPECT_NEAR(sim.mean_sojourn, ref, 0.03 * ref) << "rho=" << rho;
    EXPECT_NEAR(sim.mean_sojourn - sim.mean_wait, service, 1e-18);
  }
}

TEST(QueueSim, DeterministicPerSeed)
{
  const auto a = simulate_md1(500.0, 6.3e-4, 10'000, 9);
  const auto b = simulate_md1(500.0, 6.3e-4, 10'000, 9);
  const auto c = simulate_md1(500.0, 6.3e-4, 10'000, 10);
  EXPECT_EQ(a.mean_sojourn, b.mean_sojourn);
  EXPECT_NE(a.mean_sojourn, c.mean_sojourn);
  EXPECT_THROW(simulate_md1(0.0, 1.0, 10, 1), Error);
}
