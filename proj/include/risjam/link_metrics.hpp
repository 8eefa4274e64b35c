#pragma once

#include <risjam/channel.hpp>
#include <risjam/units.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace risjam {

/// Active-RIS reflection matrix: element n applies sqrt(beta_n) * exp(j theta_n).
class BeamformConfig
{
public:
  BeamformConfig() = default;

  BeamformConfig(std::vector<double> amplitudes, std::vector<double> phases)
    : amplitudes_(std::move(amplitudes)), phases_(std::move(phases))
  {
    if (amplitudes_.size() != phases_.size())
      throw Error("beamforming amplitudes and phases differ in length");
    for (double b : amplitudes_)
      if (!(b >= 0.0) || !std::isfinite(b))
        throw Error("RIS amplitudes must be finite and non-negative");
    for (double t : phases_)
      if (!std::isfinite(t))
        throw Error("RIS phases must be finite");
  }

  static BeamformConfig uniform(std::size_t elements, double beta, double phase = 0.0)
  {
    return {std::vector<double>(elements, beta), std::vector<double>(elements, phase)};
  }

  /// Phases theta_n = -arg(I_n G_n) in [0, 2pi), which add the cascade of
  /// `target` coherently at the BS.
  static BeamformConfig co_phased(std::span<const Complex> ris_bs, std::span<const Complex> target,
                                  std::vector<double> amplitudes)
  {
    if (ris_bs.size() != target.size() || ris_bs.size() != amplitudes.size())
      throw Error("co-phasing needs equally sized channel and amplitude vectors");
    std::vector<double> phases(ris_bs.size());
    for (std::size_t n = 0; n < phases.size(); ++n)
      phases[n] = wrap_phase(-std::arg(ris_bs[n] * target[n]));
    return {std::move(amplitudes), std::move(phases)};
  }

  static double wrap_phase(double theta)
  {
    double t = std::fmod(theta, two_pi);
    if (t < 0.0)
      t += two_pi;
    if (t >= two_pi)
      t = 0.0;
    return t;
  }

  std::size_t size() const noexcept { return amplitudes_.size(); }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<double>& phases() const noexcept { return phases_; }

  Complex coefficient(std::size_t n) const
  {
    return std::sqrt(amplitudes_[n]) * std::polar(1.0, phases_[n]);
  }

  bool within(double beta_max) const
  {
    for (double b : amplitudes_)
      if (b > beta_max)
        return false;
    return true;
  }

private:
  std::vector<double> amplitudes_;
  std::vector<double> phases_;
};

/// User transmit powers in watts, index 0 decoded first.
struct PowerAllocation
{
  std::vector<double> user_powers;

  std::size_t size() const noexcept { return user_powers.size(); }

  /// Throws unless 0 < P_k <= p_max and P_k <= P_{k+1}.
  void validate(double p_max) const
  {
    for (std::size_t k = 0; k < user_powers.size(); ++k) {
      const double p = user_powers[k];
      if (!(p > 0.0) || p > p_max)
        throw Error("user power out of (0, p_max]");
      if (k + 1 < user_powers.size() && p > user_powers[k + 1])
        throw Error("user powers violate the SIC ordering P_k <= P_k+1");
    }
  }
};

struct NoiseConfig
{
  double ris_thermal_var = 1e-13; // W
  double awgn_var = 1e-13;        // W

  static NoiseConfig from_dbm(double ris_thermal_dbm, double awgn_dbm)
  {
    return {dbm_to_watts(ris_thermal_dbm), dbm_to_watts(awgn_dbm)};
  }
};

class FblCode
{
public:
  FblCode(long blocklength, long payload_bits) : blocklength_(blocklength), payload_bits_(payload_bits)
  {
    if (blocklength < 1 || payload_bits < 1)
      throw Error("blocklength and payload must be at least 1");
  }

  long blocklength() const noexcept { return blocklength_; }
  long payload_bits() const noexcept { return payload_bits_; }
  double rate() const noexcept
  {
    return static_cast<double>(payload_bits_) / static_cast<double>(blocklength_);
  }

private:
  long blocklength_;
  long payload_bits_;
};

namespace detail {

/// Row vector I^T Theta.
inline ComplexVector cascade_row(const ChannelSet& ch, const BeamformConfig& beam)
{
  if (beam.size() != ch.element_count())
    throw Error("beamforming length does not match the RIS element count");
  ComplexVector row(beam.size());
  for (std::size_t n = 0; n < row.size(); ++n)
    row[n] = ch.ris_bs[n] * beam.coefficient(n);
  return row;
}

inline Complex dot(std::span<const Complex> row, std::span<const Complex> g)
{
  if (row.size() != g.size())
    throw Error("channel vector length mismatch");
  Complex acc{};
  for (std::size_t n = 0; n < row.size(); ++n)
    acc += row[n] * g[n];
  return acc;
}

} // namespace detail

/// SJNR of every user under SIC: user k sees users k+1..K-1 as interference.
inline std::vector<double> sjnr_all(const ChannelSet& ch, const BeamformConfig& beam,
                                    const PowerAllocation& powers, double jammer_power,
                                    const NoiseConfig& noise)
{
  const std::size_t users = ch.user_count();
  if (powers.size() != users)
    throw Error("power allocation does not match the user count");
  const auto row = detail::cascade_row(ch, beam);

  std::vector<double> received(users);
  for (std::size_t k = 0; k < users; ++k)
    received[k] = powers.user_powers[k] * std::norm(detail::dot(row, ch.users[k]));

  double row_energy = 0.0;
  for (const auto& r : row)
    row_energy += std::norm(r);
  const double floor = jammer_power * std::norm(ch.jammer_direct + detail::dot(row, ch.ris_jammer)) +
                       row_energy * noise.ris_thermal_var + noise.awgn_var;

  std::vector<double> out(users);
  double interference = 0.0;
  for (std::size_t k = users; k-- > 0;) {
    const double denom = interference + floor;
    out[k] = denom > 0.0 ? received[k] / denom : (received[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    interference += received[k];
  }
  return out;
}

inline double sjnr(const ChannelSet& ch, const BeamformConfig& beam, const PowerAllocation& powers,
                   double jammer_power, const NoiseConfig& noise, std::size_t k)
{
  if (k >= ch.user_count())
    throw Error("unknown user index " + std::to_string(k));
  return sjnr_all(ch, beam, powers, jammer_power, noise)[k];
}

/// Gaussian tail probability Q(x) = P(Z > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// log2(1 + gamma)
inline double capacity(double gamma) { return std::log1p(gamma) / std::numbers::ln2; }

/// (1 - 1/(1+gamma)^2) (log2 e)^2
inline double dispersion(double gamma)
{
  const double a = 1.0 + gamma;
  return gamma * (2.0 + gamma) / (a * a) * std::numbers::log2e * std::numbers::log2e;
}

/// Normal-approximation block error rate; 1 at zero SJNR.
inline double bler(double gamma, const FblCode& code)
{
  if (!(gamma >= 0.0))
    throw Error("SJNR must be non-negative");
  if (gamma == 0.0)
    return 1.0;
  if (std::isinf(gamma))
    return 0.0;
  const double nb = static_cast<double>(code.blocklength());
  const double arg = std::sqrt(nb / dispersion(gamma)) * (capacity(gamma) - code.rate());
  return q_function(arg);
}

/// Probability that one replica is decoded for every user in the SIC chain.
inline double replica_success(std::span<const double> blers)
{
  double p = 1.0;
  for (double e : blers) {
    if (!(e >= 0.0 && e <= 1.0))
      throw Error("block error rate outside [0, 1]");
    p *= 1.0 - e;
  }
  return p;
}

/// 1 - (1 - omega)^L for L blind replicas.
inline double reliability(double omega_s, long retransmissions)
{
  if (!(omega_s >= 0.0 && omega_s <= 1.0))
    throw Error("replica success probability outside [0, 1]");
  if (retransmissions < 1)
    throw Error("at least one transmission is required");
  return 1.0 - std::pow(1.0 - omega_s, static_cast<double>(retransmissions));
}

struct LinkReport
{
  std::vector<double> sjnr;
  std::vector<double> bler;
  double replica_success = 0.0;
  std::vector<double> reliability;
};

inline LinkReport evaluate_link(const ChannelSet& ch, const BeamformConfig& beam,
                                const PowerAllocation& powers, double jammer_power,
                                const NoiseConfig& noise, const FblCode& code, long retransmissions)
{
  LinkReport rep;
  rep.sjnr = sjnr_all(ch, beam, powers, jammer_power, noise);
  rep.bler.reserve(rep.sjnr.size());
  for (double g : rep.sjnr)
    rep.bler.push_back(bler(g, code));
  rep.replica_success = replica_success(rep.bler);
  rep.reliability.assign(rep.sjnr.size(), reliability(rep.replica_success, retransmissions));
  return rep;
}

} // namespace risjam
