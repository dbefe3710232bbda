#pragma once

#include <numbers>

// CODATA 2018 values. h, e and c are exact by SI definition.
namespace abwave::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double hbar = planck / (2.0 * pi);         // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31;   // kg
inline constexpr double speed_of_light = 299792458.0;       // m/s

}  // namespace abwave::constants
