#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hbar/constants.hpp"

namespace hbar {

// Regge-Wheeler (tortoise) coordinate, dimensionless: r* = r + ln(r - 1).
inline double tortoise(double r) {
  if (!(r > 1.0)) throw std::domain_error("tortoise: r must be > 1");
  return r + std::log(r - 1.0);
}

// Invert r* = r + ln(r - 1). Newton from a regime-aware seed; falls back to
// bisection on the bracket [1 + 1e-15, max(r*, 2) + 50] if Newton leaves it.
inline double tortoise_inverse(double r_star) {
  double lo = 1.0 + 1e-15;
  double hi = std::max(r_star, 2.0) + 50.0;
  // Near the horizon r - 1 ~ e^{r* - 1}; far out r ~ r*.
  double r = std::max(r_star, 1.0 + std::exp(r_star - 1.0));
  r = std::clamp(r, lo, hi);
  for (int it = 0; it < 80; ++it) {
    double f = r + std::log(r - 1.0) - r_star;
    if (f > 0.0) hi = std::min(hi, r); else lo = std::max(lo, r);
    double fp = 1.0 + 1.0 / (r - 1.0);
    double step = f / fp;
    double next = r - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-15 * std::max(1.0, std::abs(r))) { r = next; break; }
    r = next;
  }
  return r;
}

// Proper acceleration of a static observer at r_bar, units c^2/r_g:
// a = (1/2)(1 - 1/r_bar)^{-1/2}.
inline double rindler_static_acceleration(double r_bar) {
  if (!(r_bar > 1.0)) throw std::domain_error("rindler_static_acceleration: r_bar must be > 1");
  return 0.5 / std::sqrt(1.0 - 1.0 / r_bar);
}

// Same quantity through the near-horizon Rindler height z_bar (r = 1 + z^2/4):
// a = c^2/z_bar, dimensionless 1/z_bar.
inline double acceleration_from_rindler_height(double z_bar) {
  if (!(z_bar > 0.0)) throw std::domain_error("acceleration_from_rindler_height: z_bar must be > 0");
  return 1.0 / z_bar;
}

inline double rindler_height(double r_bar) {
  if (!(r_bar > 1.0)) throw std::domain_error("rindler_height: r_bar must be > 1");
  return 2.0 * std::sqrt(r_bar - 1.0);
}

}  // namespace hbar
