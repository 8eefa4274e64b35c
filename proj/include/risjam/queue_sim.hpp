#pragma once

// Discrete-event M/D/1 simulation, used to cross-check the closed-form mean
// delay. Kept free of any dependency on traffic_metrics.hpp.

#include <risjam/error.hpp>

#include <algorithm>
#include <cstdint>
#include <random>

namespace risjam {

struct QueueSimResult
{
  double mean_sojourn = 0.0;
  double mean_wait = 0.0;
  std::uint64_t arrivals = 0;
};

/// FIFO single server, exponential inter-arrivals, deterministic service.
/// Uses the Lindley recursion W_{n+1} = max(0, W_n + S - A_{n+1}).
inline QueueSimResult simulate_md1(double arrival_rate, double service, std::uint64_t arrivals,
                                   std::uint64_t seed)
{
  if (!(arrival_rate > 0.0) || !(service > 0.0) || arrivals == 0)
    throw Error("M/D/1 simulation needs positive rate, service time and arrival count");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(arrival_rate);

  double wait = 0.0;
  double total_wait = 0.0;
  for (std::uint64_t n = 0; n < arrivals; ++n) {
    total_wait += wait;
    wait = std::max(0.0, wait + service - gap(rng));
  }
  const double mean_wait = total_wait / static_cast<double>(arrivals);
  return {mean_wait + service, mean_wait, arrivals};
}

} // namespace risjam
