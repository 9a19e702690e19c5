#pragma once

#include <numbers>

namespace omc {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rates and frequencies are angular (rad/s) inside the library. Every file and
// command-line boundary speaks ordinary frequency (Hz).
constexpr double to_angular(double hz) { return kTwoPi * hz; }
constexpr double to_hz(double rad_per_s) { return rad_per_s / kTwoPi; }

}  // namespace omc
