#pragma once

#include <numbers>
#include <string_view>

namespace hbar {

// Physical constants in SI units. All numerics in the library are carried
// out in dimensionless geometric units (lengths in r_g, times in r_g/c);
// these values enter only at the unit-conversion boundary.
struct Constants {
  double G;     // m^3 kg^-1 s^-2
  double c;     // m s^-1
  double h;     // J s
  double hbar;  // J s
  double k_B;   // J K^-1
};

inline constexpr double pi = std::numbers::pi;

// CODATA-2018: h and k_B are exact, G is the recommended value,
// hbar derived as h / (2 pi).
inline constexpr Constants codata2018{
    6.67430e-11,
    299792458.0,
    6.62607015e-34,
    6.62607015e-34 / (2.0 * pi),
    1.380649e-23,
};

// Geometrized/natural units G = c = hbar = k_B = 1 (so h = 2 pi); used for
// dimensionless cross-checks of relations that are unit-system independent.
inline constexpr Constants natural_units{1.0, 1.0, 2.0 * pi, 1.0, 1.0};

inline constexpr std::string_view constants_version = "CODATA-2018";

}  // namespace hbar
