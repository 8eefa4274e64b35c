#pragma once

// Uniform planar RIS geometry and the deterministic line-of-sight channels
// between the RIS, the users, the base station and the jammer.

#include <risjam/error.hpp>
#include <risjam/units.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace risjam {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Vec3 = std::array<double, 3>;

/// Plane-wave arrival direction in radians. Any finite value is accepted;
/// e.g. an elevation of 2*pi behaves like 0.
struct Direction
{
  double azimuth = 0.0;
  double elevation = 0.0;
};

/// Rectangular RIS with elements indexed row by row: element n sits at
/// row index n mod rows and column index n / rows.
class RisGeometry
{
public:
  RisGeometry(std::size_t rows, std::size_t cols, double spacing_h, double spacing_v,
              double carrier_freq)
    : rows_(rows), cols_(cols), spacing_h_(spacing_h), spacing_v_(spacing_v),
      carrier_freq_(carrier_freq)
  {
    if (rows == 0 || cols == 0)
      throw Error("RIS geometry needs at least one row and one column");
    if (!(spacing_h > 0.0) || !(spacing_v > 0.0) || !std::isfinite(spacing_h) ||
        !std::isfinite(spacing_v))
      throw Error("RIS element spacing must be positive and finite");
    if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq))
      throw Error("carrier frequency must be positive and finite");
  }

  /// Square array of `elements` elements; throws unless `elements` is a perfect square.
  static RisGeometry square(std::size_t elements, double spacing_h, double spacing_v,
                            double carrier_freq)
  {
    const auto side = square_side(elements);
    if (!side)
      throw Error("element count " + std::to_string(elements) + " is not a perfect square");
    return RisGeometry(*side, *side, spacing_h, spacing_v, carrier_freq);
  }

  static std::optional<std::size_t> square_side(std::size_t elements)
  {
    if (elements == 0)
      return std::nullopt;
    auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(elements))));
    while (side * side > elements)
      --side;
    while ((side + 1) * (side + 1) <= elements)
      ++side;
    if (side * side != elements)
      return std::nullopt;
    return side;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t element_count() const noexcept { return rows_ * cols_; }
  double spacing_h() const noexcept { return spacing_h_; }
  double spacing_v() const noexcept { return spacing_v_; }
  double carrier_freq() const noexcept { return carrier_freq_; }
  double wavelength() const noexcept { return speed_of_light / carrier_freq_; }
  double element_width() const noexcept { return spacing_h_ * wavelength(); }
  double element_height() const noexcept { return spacing_v_ * wavelength(); }
  double element_area() const noexcept { return element_width() * element_height(); }

private:
  std::size_t rows_;
  std::size_t cols_;
  double spacing_h_;
  double spacing_v_;
  double carrier_freq_;
};

/// Position of element `n` (0-based) in meters. The array lies in the y-z plane.
inline Vec3 element_position(const RisGeometry& geom, std::size_t n)
{
  if (n >= geom.element_count())
    throw Error("element index " + std::to_string(n) + " out of range");
  const auto row = static_cast<double>(n % geom.rows());
  const auto col = static_cast<double>(n / geom.rows());
  return {0.0, row * geom.element_width(), col * geom.element_height()};
}

inline Vec3 wave_vector(Direction dir, double wavelength)
{
  if (!std::isfinite(dir.azimuth) || !std::isfinite(dir.elevation) || !std::isfinite(wavelength))
    throw Error("wave vector arguments must be finite");
  if (!(wavelength > 0.0))
    throw Error("wavelength must be positive");
  const double k = two_pi / wavelength;
  const double ce = std::cos(dir.elevation);
  return {k * std::cos(dir.azimuth) * ce, k * std::sin(dir.azimuth) * ce,
          k * std::sin(dir.elevation)};
}

/// Entry n is exp(j * zeta^T u_n); entry 0 is exactly 1.
inline ComplexVector array_response(const RisGeometry& geom, Direction dir)
{
  const auto zeta = wave_vector(dir, geom.wavelength());
  ComplexVector out(geom.element_count());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const auto u = element_position(geom, n);
    const double phase = zeta[0] * u[0] + zeta[1] * u[1] + zeta[2] * u[2];
    out[n] = std::polar(1.0, phase);
  }
  return out;
}

/// Physical link parameters shared by all channels. Path gain is linear.
struct LinkScenario
{
  double path_gain = 1000.0;
  double path_loss_exp = 2.0;
  double dist_ris_bs = 4.0;
  std::vector<double> dist_ris_ue{20.0, 25.0};
  double dist_jammer = 30.0;
  /// RIS-jammer distance; the jammer-BS distance is used when unset.
  std::optional<double> dist_ris_jammer;
  Direction dir_bs{};
  Direction dir_jammer{};
  std::vector<Direction> dir_users;
  double jammer_power = 5e-3;

  std::size_t user_count() const noexcept { return dist_ris_ue.size(); }

  double ris_jammer_distance() const noexcept { return dist_ris_jammer.value_or(dist_jammer); }

  void validate() const
  {
    if (!(path_gain > 0.0) || !std::isfinite(path_gain))
      throw Error("path gain must be positive");
    if (!(path_loss_exp >= 0.0) || !std::isfinite(path_loss_exp))
      throw Error("path loss exponent must be non-negative");
    if (dist_ris_ue.empty())
      throw Error("at least one user is required");
    if (dir_users.size() != dist_ris_ue.size())
      throw Error("each user needs exactly one direction");
    auto positive = [](double d) { return d > 0.0 && std::isfinite(d); };
    if (!positive(dist_ris_bs) || !positive(dist_jammer) || !positive(ris_jammer_distance()))
      throw Error("distances must be positive");
    for (double d : dist_ris_ue)
      if (!positive(d))
        throw Error("distances must be positive");
    if (!(jammer_power >= 0.0) || !std::isfinite(jammer_power))
      throw Error("jammer power must be non-negative");
  }
};

/// sqrt(L * d^-delta): common magnitude of every entry of a channel of length d.
inline double path_amplitude(double path_gain, double path_loss_exp, double distance)
{
  if (!(distance > 0.0))
    throw Error("distance must be positive");
  return std::sqrt(path_gain * std::pow(distance, -path_loss_exp));
}

namespace detail {

inline Complex propagation(double path_gain, double path_loss_exp, double distance,
                           double wavelength)
{
  return path_amplitude(path_gain, path_loss_exp, distance) *
         std::polar(1.0, -two_pi * distance / wavelength);
}

inline ComplexVector scaled(Complex factor, ComplexVector v)
{
  for (auto& x : v)
    x *= factor;
  return v;
}

} // namespace detail

inline ComplexVector ris_ue_channel(const RisGeometry& geom, const LinkScenario& scen,
                                    std::size_t k)
{
  if (k >= scen.user_count() || k >= scen.dir_users.size())
    throw Error("unknown user index " + std::to_string(k));
  return detail::scaled(detail::propagation(scen.path_gain, scen.path_loss_exp,
                                            scen.dist_ris_ue[k], geom.wavelength()),
                        array_response(geom, scen.dir_users[k]));
}

inline ComplexVector ris_bs_channel(const RisGeometry& geom, const LinkScenario& scen)
{
  return detail::scaled(detail::propagation(scen.path_gain, scen.path_loss_exp, scen.dist_ris_bs,
                                            geom.wavelength()),
                        array_response(geom, scen.dir_bs));
}

inline Complex jammer_direct_channel(const LinkScenario& scen, double wavelength)
{
  if (!(scen.dist_jammer > 0.0))
    throw Error("jammer distance must be positive");
  return detail::propagation(scen.path_gain, scen.path_loss_exp, scen.dist_jammer, wavelength);
}

inline ComplexVector ris_jammer_channel(const RisGeometry& geom, const LinkScenario& scen)
{
  return detail::scaled(detail::propagation(scen.path_gain, scen.path_loss_exp,
                                            scen.ris_jammer_distance(), geom.wavelength()),
                        array_response(geom, scen.dir_jammer));
}

/// All channels of one scenario, ready for SJNR evaluation.
struct ChannelSet
{
  std::vector<ComplexVector> users; // G_k
  ComplexVector ris_bs;             // I
  Complex jammer_direct;            // h_j
  ComplexVector ris_jammer;         // G_j

  std::size_t element_count() const noexcept { return ris_bs.size(); }
  std::size_t user_count() const noexcept { return users.size(); }
};

inline ChannelSet build_channels(const RisGeometry& geom, const LinkScenario& scen)
{
  scen.validate();
  ChannelSet set;
  for (std::size_t k = 0; k < scen.user_count(); ++k)
    set.users.push_back(ris_ue_channel(geom, scen, k));
  set.ris_bs = ris_bs_channel(geom, scen);
  set.jammer_direct = jammer_direct_channel(scen, geom.wavelength());
  set.ris_jammer = ris_jammer_channel(geom, scen);
  return set;
}

} // namespace risjam
