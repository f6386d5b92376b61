#pragma once

// Physical constants (SI, CODATA 2018 exact where defined) and the conversions
// between laboratory units and the reduced rotor units used everywhere else
// in the library: hbar = B = 1, so time is measured in hbar/B and T_rot = pi.

#include <numbers>

namespace rotalign::units {

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kHbar = kPlanck / (2.0 * kPi);     // J s
inline constexpr double kSpeedOfLight = 2.99792458e8;      // m / s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F / m
inline constexpr double kDebye = 3.33564095198152e-30;     // C m
inline constexpr double kAngstrom3 = 1e-30;                // m^3

// k_B / (h c) in cm^-1 per kelvin, truncated as used for temperature input.
inline constexpr double kBoltzmannWavenumber = 0.6950;

// Rotational period in reduced time units.
inline constexpr double kRotationalPeriod = kPi;

inline constexpr double wavenumber_to_joule(double cm_inv) {
  return cm_inv * 100.0 * kPlanck * kSpeedOfLight;
}

// Seconds per reduced time unit (hbar / B).
inline constexpr double reduced_time_unit(double b_cm_inv) {
  return kHbar / wavenumber_to_joule(b_cm_inv);
}

inline constexpr double seconds_to_reduced(double seconds, double b_cm_inv) {
  return seconds / reduced_time_unit(b_cm_inv);
}

inline constexpr double reduced_to_seconds(double t, double b_cm_inv) {
  return t * reduced_time_unit(b_cm_inv);
}

// T_rot = pi hbar / B = 1 / (2 c B).
inline constexpr double rotational_period_seconds(double b_cm_inv) {
  return kPi * reduced_time_unit(b_cm_inv);
}

// TW/cm^2 -> W/m^2.
inline constexpr double tw_per_cm2_to_si(double intensity) { return intensity * 1e16; }

// Peak |E|^2 for a linearly polarized field, I = 1/2 eps0 c E^2.
inline constexpr double field_squared_from_intensity(double intensity_si) {
  return 2.0 * intensity_si / (kVacuumPermittivity * kSpeedOfLight);
}

// Polarizability volume (m^3) -> SI polarizability (C m^2 / V).
inline constexpr double polarizability_si(double volume_m3) {
  return 4.0 * kPi * kVacuumPermittivity * volume_m3;
}

inline constexpr double kv_per_cm_to_si(double field) { return field * 1e5; }

inline constexpr double fs = 1e-15;
inline constexpr double ps = 1e-12;

}  // namespace rotalign::units
