#include "qhd/units.hpp"

#include <cmath>

#include "qhd/error.hpp"

namespace qhd::si {

double compton_length(double mass_kg) { return hbar / (mass_kg * c); }

double compton_time(double mass_kg) { return hbar / (mass_kg * c * c); }

double temperature_to_natural(double kelvin, double mass_kg) { return k_B * kelvin / (mass_kg * c * c); }

double correlation_length(double kelvin, double mass_kg, double kappa) {
  if (!(kelvin > 0.0) || !(mass_kg > 0.0)) fail(ErrorKind::invalid_argument, "T and m must be > 0");
  return kappa * hbar / std::sqrt(2.0 * mass_kg * k_B * kelvin);
}

}  // namespace qhd::si
