#pragma once

#include <cmath>
#include <numbers>

namespace risjam {

inline constexpr double speed_of_light = 299'792'458.0; // m/s, exact SI
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

} // namespace risjam
