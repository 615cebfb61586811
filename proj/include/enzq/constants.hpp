#pragma once

#include <numbers>

namespace enzq::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kHbar = 1.054571817e-34;               // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kDebye = 3.33564e-30;                  // C m

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rates quoted in GHz are ordinary frequencies; rad/s = 2*pi*1e9*GHz.
constexpr double ghz_to_rad_per_s(double ghz) { return kTwoPi * 1e9 * ghz; }
constexpr double rad_per_s_to_ghz(double w) { return w / (kTwoPi * 1e9); }
constexpr double ev_to_rad_per_s(double ev) { return ev * kElementaryCharge / kHbar; }

}  // namespace enzq::constants
