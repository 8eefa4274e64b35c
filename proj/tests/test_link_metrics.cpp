#include "oracles.hpp"

#include <risjam/link_metrics.hpp>

#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <random>

using namespace risjam;

TEST(Beamform, Validation)
{
  EXPECT_THROW(BeamformConfig({1.0, 2.0}, {0.0}), Error);
  EXPECT_THROW(BeamformConfig({-1.0}, {0.0}), Error);
  EXPECT_THROW(BeamformConfig({1.0}, {INFINITY}), Error);
  const BeamformConfig b({4.0}, {0.0});
  EXPECT_EQ(b.coefficient(0), Complex(2.0, 0.0));
  EXPECT_TRUE(b.within(4.0));
  EXPECT_FALSE(b.within(3.9));
}

TEST(Beamform, WrapPhase)
{
  EXPECT_DOUBLE_EQ(BeamformConfig::wrap_phase(-0.5), two_pi - 0.5);
  EXPECT_DOUBLE_EQ(BeamformConfig::wrap_phase(two_pi + 0.25), 0.25);
  EXPECT_EQ(BeamformConfig::wrap_phase(two_pi), 0.0);
}

TEST(Beamform, CoPhasingAlignsCascade)
{
  std::mt19937_64 rng(7);
  const auto ch = oracle::random_channels(rng, 1, 9);
  const auto beam = BeamformConfig::co_phased(ch.ris_bs, ch.users[0], std::vector<double>(9, 2.0));
  double coherent = 0.0;
  for (std::size_t n = 0; n < 9; ++n)
    coherent += std::abs(ch.ris_bs[n]) * std::abs(ch.users[0][n]) * std::sqrt(2.0);
  const auto row = detail::cascade_row(ch, beam);
  EXPECT_NEAR(std::abs(detail::dot(row, ch.users[0])), coherent, 1e-12 * coherent);
}

TEST(Powers, Validation)
{
  EXPECT_NO_THROW((PowerAllocation{{0.01, 0.02}}.validate(0.1)));
  EXPECT_THROW((PowerAllocation{{0.02, 0.01}}.validate(0.1)), Error);
  EXPECT_THROW((PowerAllocation{{0.0, 0.01}}.validate(0.1)), Error);
  EXPECT_THROW((PowerAllocation{{0.01, 0.2}}.validate(0.1)), Error);
}

TEST(Sjnr, ZeroAmplitudeGivesZero)
{
  std::mt19937_64 rng(1);
  const auto ch = oracle::random_channels(rng, 3, 4);
  const auto g = sjnr_all(ch, BeamformConfig::uniform(4, 0.0), {{1.0, 1.0, 1.0}}, 1.0, {});
  for (double x : g)
    EXPECT_EQ(x, 0.0);
}

TEST(Sjnr, HandEvaluatedSingleElement)
{
  ChannelSet ch;
  ch.users = {{Complex(1.0, 0.0)}};
  ch.ris_bs = {Complex(1.0, 0.0)};
  ch.jammer_direct = 0.0;
  ch.ris_jammer = {Complex(0.0, 0.0)};
  const NoiseConfig noise{0.0, 1.0};
  EXPECT_DOUBLE_EQ(sjnr(ch, BeamformConfig::uniform(1, 4.0), {{1.0}}, 0.0, noise, 0), 4.0);
}

TEST(Sjnr, SicInterferenceOnlyFromLaterUsers)
{
  std::mt19937_64 rng(3);
  const auto ch = oracle::random_channels(rng, 2, 4);
  const BeamformConfig beam({1.0, 2.0, 3.0, 4.0}, {0.1, 0.2, 0.3, 0.4});
  const NoiseConfig noise{0.01, 0.02};
  const auto row = detail::cascade_row(ch, beam);
  const double s1 = std::norm(detail::dot(row, ch.users[0]));
  const double s2 = 2.0 * std::norm(detail::dot(row, ch.users[1]));
  const double jam = 0.5 * std::norm(ch.jammer_direct + detail::dot(row, ch.ris_jammer));
  double row_energy = 0.0;
  for (const auto& r : row)
    row_energy += std::norm(r);
  const double base = jam + row_energy * 0.01 + 0.02;
  const auto g = sjnr_all(ch, beam, {{1.0, 2.0}}, 0.5, noise);
  EXPECT_NEAR(g[0], s1 / (s2 + base), 1e-12 * g[0]);
  EXPECT_NEAR(g[1], s2 / base, 1e-12 * g[1]);
}

TEST(Sjnr, MatchesScalarOracle)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t users = 1 + trial % 3, elements = 1 + trial % 8;
    const auto ch = oracle::random_channels(rng, users, elements);
    std::vector<double> beta(elements), theta(elements), p(users);
    for (auto& b : beta)
      b = 10.0 * u(rng);
    for (auto& t : theta)
      t = two_pi * u(rng);
    for (auto& x : p)
      x = u(rng);
    const double pj = u(rng), sr = 0.1 * u(rng), s2 = 0.1 * u(rng);
    const auto g = sjnr_all(ch, BeamformConfig(beta, theta), {p}, pj, {sr, s2});
    for (std::size_t k = 0; k < users; ++k) {
      const double ref = oracle::sjnr_scalar(ch, beta, theta, p, pj, sr, s2, k);
      EXPECT_NEAR(g[k], ref, 1e-10 * ref);
    }
  }
}

TEST(Sjnr, RejectsShapeMismatch)
{
  std::mt19937_64 rng(1);
  const auto ch = oracle::random_channels(rng, 2, 4);
  EXPECT_THROW(sjnr_all(ch, BeamformConfig::uniform(3, 1.0), {{1.0, 1.0}}, 0.0, {}), Error);
  EXPECT_THROW(sjnr_all(ch, BeamformConfig::uniform(4, 1.0), {{1.0}}, 0.0, {}), Error);
  EXPECT_THROW(sjnr(ch, BeamformConfig::uniform(4, 1.0), {{1.0, 1.0}}, 0.0, {}, 2), Error);
}

TEST(QFunction, FrozenValues)
{
  EXPECT_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(1.959964), 0.025, 1e-6);
  EXPECT_NEAR(q_function(1.959964), 0.024999999096442404, 1e-15);
  EXPECT_LE(q_function(40.0), 1e-300);
  const std::pair<double, double> table[] = {
    {0.5, 0.3085375387259869},     {1.0, 0.15865525393145705},   {2.0, 0.022750131948179207},
    {3.0, 1.3498980316300946e-3},  {5.0, 2.866515718791939e-7},  {8.0, 6.220960574271784e-16},
    {-3.0, 0.9986501019683699},
  };
  for (auto [x, q] : table)
    EXPECT_NEAR(q_function(x), q, 1e-13 * q) << "x=" << x;
}

TEST(QFunction, AgreesWithMultiprecision)
{
  for (double x = -6.0; x <= 30.0; x += 0.37) {
    const double ref = static_cast<double>(oracle::q_hp(oracle::hp(x)));
    // relative condition number of Q grows like x^2, so rounding x / sqrt(2)
    // alone costs about x^2 ulp in the deep tail
    const double tol = 1e-14 + 4.0 * DBL_EPSILON * x * x;
    EXPECT_NEAR(q_function(x), ref, tol * ref) << "x=" << x;
  }
}

TEST(Bler, FrozenExample)
{
  // exact argument is 4.0018871128431456
  EXPECT_NEAR(dispersion(1.0), 1.5610267357542058, 1e-15);
  const double e = bler(1.0, FblCode(100, 50));
  EXPECT_NEAR(e, 3.1419640041507472e-5, 1e-10 * 3.1419640041507472e-5);
  EXPECT_NEAR(e, 3.14e-5, 0.01e-5);
}

TEST(Bler, CapacityAtRateGivesHalf)
{
  EXPECT_EQ(bler(1.0, FblCode(64, 64)), 0.5);
  EXPECT_EQ(bler(3.0, FblCode(50, 100)), 0.5);
}

TEST(Bler, Limits)
{
  EXPECT_EQ(bler(0.0, FblCode(108, 256)), 1.0);
  EXPECT_EQ(bler(INFINITY, FblCode(108, 256)), 0.0);
  EXPECT_THROW(bler(-1e-3, FblCode(108, 256)), Error);
  EXPECT_THROW(bler(NAN, FblCode(108, 256)), Error);
  EXPECT_THROW(FblCode(0, 256), Error);
}

TEST(Bler, MonotoneInSjnr)
{
  const FblCode code(108, 256);
  double prev = 1.0;
  for (double g = 1e-3; g < 1e4; g *= 1.3) {
    const double e = bler(g, code);
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(Bler, AgreesWithMultiprecision)
{
  for (double g : {0.01, 0.3, 1.0, 2.5, 7.0, 30.0}) {
    for (long nb : {20L, 108L, 400L}) {
      const double ref = static_cast<double>(oracle::bler_hp(oracle::hp(g), nb, 256));
      if (ref < 1e-300)
        continue;
      EXPECT_NEAR(bler(g, FblCode(nb, 256)), ref, 1e-9 * ref) << g << " " << nb;
    }
  }
}

TEST(Reliability, ReplicaSuccess)
{
  EXPECT_EQ(replica_success(std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(replica_success(std::vector<double>{0.1, 0.2}), 0.72);
  EXPECT_EQ(replica_success(std::vector<double>{0.3, 1.0}), 0.0);
  EXPECT_THROW(replica_success(std::vector<double>{1.5}), Error);
}

TEST(Reliability, Diversity)
{
  EXPECT_EQ(reliability(0.37, 1), 0.37);
  EXPECT_NEAR(reliability(0.9, 2), 0.99, 1e-15);
  EXPECT_NEAR(1.0 - reliability(0.684, 10), 9.928207061616529e-6, 1e-13);
  EXPECT_GE(reliability(0.684, 10), 0.99999);
  EXPECT_THROW(reliability(0.5, 0), Error);
  EXPECT_THROW(reliability(1.1, 1), Error);
}

TEST(Reliability, EvaluateLinkChain)
{
  ChannelSet ch;
  ch.users = {{Complex(1.0, 0.0)}};
  ch.ris_bs = {Complex(1.0, 0.0)};
  ch.ris_jammer = {Complex(0.0, 0.0)};
  const auto rep =
    evaluate_link(ch, BeamformConfig::uniform(1, 1.0), {{1.0}}, 0.0, {0.0, 1.0}, FblCode(100, 50), 3);
  EXPECT_DOUBLE_EQ(rep.sjnr[0], 1.0);
  EXPECT_NEAR(rep.bler[0], 3.1419640041507472e-5, 1e-15);
  EXPECT_NEAR(rep.reliability[0], 1.0 - std::pow(rep.bler[0], 3.0), 1e-15);
}
