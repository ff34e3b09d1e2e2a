#pragma once

#include <stdexcept>

#include "hbar/constants.hpp"

namespace hbar {

enum class UnitMode { Dimensionless, SI };

// Conversion between the internal dimensionless system (lengths in r_g,
// times in r_g/c, frequencies in c/r_g, accelerations in c^2/r_g) and SI.
// Values inside the library never carry units; conversions happen at the
// I/O boundary only.
class UnitSystem {
 public:
  explicit UnitSystem(double r_g_meters, UnitMode mode = UnitMode::Dimensionless,
                      const Constants& k = codata2018)
      : r_g_(r_g_meters), c_(k.c), mode_(mode) {
    if (!(r_g_ > 0.0)) throw std::domain_error("UnitSystem: r_g must be > 0");
  }

  double r_g_meters() const { return r_g_; }
  UnitMode mode() const { return mode_; }

  double length_to_si(double x) const { return x * r_g_; }
  double length_from_si(double x) const { return x / r_g_; }

  double time_to_si(double t) const { return t * r_g_ / c_; }
  double time_from_si(double t) const { return t * c_ / r_g_; }

  // rad/s <-> c/r_g
  double frequency_to_si(double w) const { return w * c_ / r_g_; }
  double frequency_from_si(double w) const { return w * r_g_ / c_; }

  double rate_to_si(double r) const { return r * c_ / r_g_; }
  double rate_from_si(double r) const { return r * r_g_ / c_; }

  double acceleration_to_si(double a) const { return a * c_ * c_ / r_g_; }
  double acceleration_from_si(double a) const { return a * r_g_ / (c_ * c_); }

 private:
  double r_g_;
  double c_;
  UnitMode mode_;
};

}  // namespace hbar
