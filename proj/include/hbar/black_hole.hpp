#pragma once

#include <cmath>
#include <stdexcept>

#include "hbar/constants.hpp"
#include "hbar/units.hpp"

namespace hbar {

inline double gravitational_radius(double mass_kg, const Constants& k = codata2018) {
  if (!(mass_kg > 0.0)) throw std::domain_error("gravitational_radius: mass must be > 0");
  return 2.0 * k.G * mass_kg / (k.c * k.c);
}

// T_H = hbar c^3 / (8 pi k_B G M)
inline double hawking_temperature(double mass_kg, const Constants& k = codata2018) {
  if (!(mass_kg > 0.0)) throw std::domain_error("hawking_temperature: mass must be > 0");
  return k.hbar * k.c * k.c * k.c / (8.0 * pi * k.k_B * k.G * mass_kg);
}

// A = 16 pi G^2 M^2 / c^4 = 4 pi r_g^2
inline double horizon_area(double mass_kg, const Constants& k = codata2018) {
  if (!(mass_kg > 0.0)) throw std::domain_error("horizon_area: mass must be > 0");
  double rg = gravitational_radius(mass_kg, k);
  return 4.0 * pi * rg * rg;
}

struct BlackHole {
  double mass_kg;
  double r_g_m;
  double area_m2;
  double T_H_K;

  static BlackHole from_mass(double mass_kg, const Constants& k = codata2018) {
    BlackHole bh;
    bh.mass_kg = mass_kg;
    bh.r_g_m = gravitational_radius(mass_kg, k);
    bh.area_m2 = horizon_area(mass_kg, k);
    bh.T_H_K = hawking_temperature(mass_kg, k);
    return bh;
  }

  static BlackHole from_radius(double r_g_meters, const Constants& k = codata2018) {
    if (!(r_g_meters > 0.0)) throw std::domain_error("BlackHole: r_g must be > 0");
    return from_mass(r_g_meters * k.c * k.c / (2.0 * k.G), k);
  }

  UnitSystem units(const Constants& k = codata2018) const {
    return UnitSystem(r_g_m, UnitMode::Dimensionless, k);
  }
};

// dS/dt by the two equivalent routes: directly from M dM/dt and through the
// horizon-area rate. Equality is asserted (they agree to rounding).
struct BHEntropyRate {
  double from_mass;  // J K^-1 s^-1
  double from_area;  // J K^-1 s^-1
  double area_rate;  // m^2 s^-1
};

inline BHEntropyRate bh_entropy_rate(double mass_kg, double mass_rate_kg_s,
                                     const Constants& k = codata2018) {
  if (!(mass_kg > 0.0)) throw std::domain_error("bh_entropy_rate: mass must be > 0");
  BHEntropyRate r;
  r.from_mass = k.k_B * 8.0 * pi * k.G / (k.hbar * k.c) * mass_kg * mass_rate_kg_s;
  r.area_rate = 32.0 * pi * k.G * k.G * mass_kg * mass_rate_kg_s / (k.c * k.c * k.c * k.c);
  r.from_area = k.k_B * k.c * k.c * k.c / (4.0 * k.hbar * k.G) * r.area_rate;
  double scale = std::max(std::abs(r.from_mass), std::abs(r.from_area));
  if (std::abs(r.from_mass - r.from_area) > 1e-12 * scale)
    throw std::logic_error("bh_entropy_rate: mass and area routes disagree");
  return r;
}

}  // namespace hbar
