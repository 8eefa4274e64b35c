#pragma once

#include <risjam/channel.hpp>
#include <risjam/link_metrics.hpp>
#include <risjam/traffic_metrics.hpp>

#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace risjam {

/// Full physical configuration of one network instance.
struct Scenario
{
  RisGeometry geometry{4, 4, 0.25, 0.25, 28e9};
  LinkScenario links;
  NoiseConfig noise;
  FrameParams frame;
  TrafficParams traffic;
  long payload_bits = 256;
  /// Transmit powers used by the fixed beamforming policies of the sweeps.
  PowerAllocation powers;

  std::size_t user_count() const noexcept { return links.user_count(); }

  FblCode code() const { return {frame.blocklength, payload_bits}; }

  void validate() const
  {
    links.validate();
    frame.validate();
    traffic.validate();
    if (traffic.arrival_rates.size() != user_count())
      throw Error("one arrival rate per user is required");
    if (powers.size() != user_count())
      throw Error("one transmit power per user is required");
    if (payload_bits < 1)
      throw Error("payload must be at least one bit");
    if (!(noise.ris_thermal_var >= 0.0) || !(noise.awgn_var >= 0.0))
      throw Error("noise variances must be non-negative");
  }
};

/// Defaults of the reference two-user scenario (28 GHz, quarter-wavelength
/// spacing, 30 dB reference gain, 5 mW jammer at 30 m, -100 dBm noise).
inline Scenario reference_scenario()
{
  using std::numbers::pi;
  Scenario s;
  s.links.path_gain = db_to_linear(30.0);
  s.links.path_loss_exp = 2.0;
  s.links.dist_ris_bs = 4.0;
  s.links.dist_ris_ue = {20.0, 25.0};
  s.links.dist_jammer = 30.0;
  s.links.dir_bs = {pi / 6.0, 0.0};
  s.links.dir_users = {{pi / 2.0, 2.0 * pi}, {pi / 2.0, 2.0 * pi}};
  s.links.dir_jammer = {pi / 4.0, pi / 2.0};
  s.links.jammer_power = 5e-3;
  s.noise = NoiseConfig::from_dbm(-100.0, -100.0);
  s.frame = {30e-6, 180e3, 108};
  s.traffic = {{500.0, 500.0}, 10};
  s.payload_bits = 32 * 8;
  s.powers = {{1e-3, 1e-3}};
  return s;
}

struct MetricsReport
{
  LinkReport link;
  std::vector<double> utilization;
  /// +inf for users whose queue is unstable.
  std::vector<double> mean_delay;
  bool stable = true;
  std::optional<double> energy_efficiency;
};

/// Runs channel -> SJNR -> BLER -> reliability -> delay -> energy efficiency.
inline MetricsReport evaluate_metrics(const Scenario& scen, const ChannelSet& ch,
                                      const BeamformConfig& beam, const PowerAllocation& powers,
                                      long blocklength, long retransmissions)
{
  MetricsReport rep;
  const FblCode code(blocklength, scen.payload_bits);
  rep.link = evaluate_link(ch, beam, powers, scen.links.jammer_power, scen.noise, code,
                           retransmissions);

  FrameParams fp = scen.frame;
  fp.blocklength = blocklength;
  TrafficParams tp{scen.traffic.arrival_rates, retransmissions};
  const std::size_t users = ch.user_count();
  rep.utilization.resize(users);
  rep.mean_delay.resize(users);
  for (std::size_t k = 0; k < users; ++k) {
    rep.utilization[k] = utilization(fp, tp, k);
    if (rep.utilization[k] < 1.0) {
      rep.mean_delay[k] = mean_delay(fp, tp, k);
    } else {
      rep.mean_delay[k] = std::numeric_limits<double>::infinity();
      rep.stable = false;
    }
  }
  if (rep.stable)
    rep.energy_efficiency =
      energy_efficiency(scen.payload_bits, rep.link.reliability, powers.user_powers, rep.mean_delay);
  return rep;
}

/// Co-phased to user `target` with identical amplitude on every element.
inline BeamformConfig co_phased_uniform(const ChannelSet& ch, std::size_t target, double beta)
{
  if (target >= ch.user_count())
    throw Error("unknown user index " + std::to_string(target));
  return BeamformConfig::co_phased(ch.ris_bs, ch.users[target],
                                   std::vector<double>(ch.element_count(), beta));
}

} // namespace risjam
