#pragma once

// Frame timing, M/D/1 queueing under blind retransmission diversity, and
// system energy efficiency.

#include <risjam/error.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace risjam {

struct FrameParams
{
  double header_time = 30e-6; // s
  double bandwidth = 180e3;   // Hz
  long blocklength = 108;     // channel uses

  void validate() const
  {
    if (!(header_time >= 0.0) || !std::isfinite(header_time))
      throw Error("header time must be non-negative");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
      throw Error("bandwidth must be positive");
    if (blocklength < 1)
      throw Error("blocklength must be at least 1");
  }

  double payload_time() const { return static_cast<double>(blocklength) / bandwidth; }
};

struct TrafficParams
{
  std::vector<double> arrival_rates; // packets/s per user
  long retransmissions = 1;

  void validate() const
  {
    for (double r : arrival_rates)
      if (!(r > 0.0) || !std::isfinite(r))
        throw Error("arrival rates must be positive");
    if (retransmissions < 1)
      throw Error("at least one transmission is required");
  }
};

inline double frame_duration(const FrameParams& fp)
{
  fp.validate();
  return fp.header_time + fp.payload_time();
}

/// Service time of one packet: all replicas back to back.
inline double service_time(const FrameParams& fp, const TrafficParams& tp)
{
  return static_cast<double>(tp.retransmissions) * frame_duration(fp);
}

inline double utilization(const FrameParams& fp, const TrafficParams& tp, std::size_t k)
{
  tp.validate();
  if (k >= tp.arrival_rates.size())
    throw Error("unknown user index " + std::to_string(k));
  return service_time(fp, tp) * tp.arrival_rates[k];
}

/// Mean sojourn time of an M/D/1 queue with deterministic service `service`
/// and Poisson arrivals of rate `arrival_rate`.
inline double md1_mean_sojourn(double service, double arrival_rate)
{
  const double rho = service * arrival_rate;
  if (!(rho < 1.0))
    throw UnstableQueueError(rho);
  return service * (2.0 - rho) / (2.0 * (1.0 - rho));
}

inline double mean_delay(const FrameParams& fp, const TrafficParams& tp, std::size_t k)
{
  tp.validate();
  if (k >= tp.arrival_rates.size())
    throw Error("unknown user index " + std::to_string(k));
  return md1_mean_sojourn(service_time(fp, tp), tp.arrival_rates[k]);
}

/// Successfully delivered bits per joule: n_d * sum(Rel_k) / sum(P_k * tau_k).
inline double energy_efficiency(long payload_bits, std::span<const double> reliabilities,
                                std::span<const double> powers, std::span<const double> delays)
{
  if (reliabilities.size() != powers.size() || powers.size() != delays.size())
    throw Error("energy efficiency inputs differ in length");
  double delivered = 0.0;
  for (double r : reliabilities)
    delivered += r;
  double energy = 0.0;
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (!std::isfinite(delays[k]))
      throw Error("energy efficiency needs finite delays");
    energy += powers[k] * delays[k];
  }
  if (!(energy > 0.0))
    throw Error("energy efficiency denominator is zero");
  return static_cast<double>(payload_bits) * delivered / energy;
}

} // namespace risjam
