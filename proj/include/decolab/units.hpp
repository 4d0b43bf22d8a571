#pragma once

// Pinned physical constants (CODATA 2018, exact SI values where defined) and
// conversions between SI and the natural units hbar = k_B = 1 used by the
// library. The natural system keeps the SI metre and second, so lengths and
// times are unchanged and masses and temperatures are rescaled.

namespace decolab::units {

inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double k_boltzmann = 1.380649e-23;     // J / K
inline constexpr double seconds_per_year = 365.25 * 86400.0;  // Julian year

/// kg per natural mass unit (hbar s / m^2).
inline constexpr double mass_unit = hbar;
/// K per natural temperature unit (hbar / (k_B s)).
inline constexpr double temperature_unit = hbar / k_boltzmann;
/// J per natural energy unit (hbar / s).
inline constexpr double energy_unit = hbar;

inline constexpr double mass_to_natural(double kg) { return kg / mass_unit; }
inline constexpr double mass_to_si(double m) { return m * mass_unit; }
inline constexpr double temperature_to_natural(double kelvin) { return kelvin / temperature_unit; }
inline constexpr double temperature_to_si(double t) { return t * temperature_unit; }
inline constexpr double energy_to_natural(double joule) { return joule / energy_unit; }
inline constexpr double energy_to_si(double e) { return e * energy_unit; }

}  // namespace decolab::units
