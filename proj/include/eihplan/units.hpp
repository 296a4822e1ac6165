#pragma once

#include <cmath>

namespace eihplan {

inline constexpr double kHz = 1.0e3;
inline constexpr double kMHz = 1.0e6;
inline constexpr double kGHz = 1.0e9;
inline constexpr double kKbit = 1.0e3;
inline constexpr double kMbit = 1.0e6;
inline constexpr double kGbit = 1.0e9;
inline constexpr double kMcycle = 1.0e6;
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kDegPerRad = 180.0 / kPi;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

inline double db_to_linear_amplitude(double db) { return std::pow(10.0, -db / 20.0); }

}  // namespace eihplan
