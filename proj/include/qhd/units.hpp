#pragma once

namespace qhd::si {

// CODATA 2018 exact / recommended values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_B = 1.380649e-23;            // J / K
inline constexpr double c = 299792458.0;               // m / s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double elementary_charge = 1.602176634e-19;  // C

/// Reduced Compton wavelength hbar / (m c), the natural-unit length for mass m.
double compton_length(double mass_kg);
/// Natural-unit time hbar / (m c^2).
double compton_time(double mass_kg);
/// k_B T / (m c^2): a temperature in kelvin as a natural-unit energy for mass m.
double temperature_to_natural(double kelvin, double mass_kg);
/// kappa hbar / sqrt(2 m k_B T) in metres.
double correlation_length(double kelvin, double mass_kg, double kappa = 1.0);

}  // namespace qhd::si
