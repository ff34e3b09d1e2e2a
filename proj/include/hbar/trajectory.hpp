#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hbar/geometry.hpp"
#include "hbar/ode.hpp"

namespace hbar {

// Radial free fall from rest at infinity, dimensionless units.
// Closed forms (integration of dtau/dr = -sqrt(r), dt/dr = -r^{3/2}/(r-1)):
//   tau(r) = -(2/3) r^{3/2} + tau_offset
//   t(r)   = -(2/3) r^{3/2} - 2 sqrt(r) - ln[(sqrt(r)-1)/(sqrt(r)+1)] + t_offset
// Default conventions: tau(1) = 0 (horizon crossing), t(4) = 0.
struct InfallTrajectory {
  double tau_offset = 2.0 / 3.0;
  double t_offset = default_t_offset();

  static double default_t_offset() { return 16.0 / 3.0 + 4.0 - std::log(3.0); }

  double proper_time_at(double r) const {
    if (!(r >= 1.0)) throw std::domain_error("proper_time_at: r must be >= 1");
    return -(2.0 / 3.0) * r * std::sqrt(r) + tau_offset;
  }

  double coordinate_time_at(double r) const {
    if (!(r > 1.0)) throw std::domain_error("coordinate_time_at: r must be > 1");
    double sq = std::sqrt(r);
    return -(2.0 / 3.0) * r * sq - 2.0 * sq - std::log((sq - 1.0) / (sq + 1.0)) + t_offset;
  }

  // Retarded combination t - r* along the infall. Written in w = sqrt(r)
  // with r - 1 = (w-1)(w+1): the logs from t and r* merge into a single
  // -2 ln(w-1), which avoids cancellation error near the horizon where both
  // terms diverge. wm1 = w - 1 may be supplied directly when r is known only
  // through a small offset from the horizon.
  double retarded_phase_base(double r) const {
    if (!(r > 1.0)) throw std::domain_error("retarded_phase_base: r must be > 1");
    return retarded_phase_base_wm1(std::sqrt(r) - 1.0);
  }

  double retarded_phase_base_wm1(double wm1) const {
    if (!(wm1 > 0.0)) throw std::domain_error("retarded_phase_base_wm1: w must be > 1");
    double w = 1.0 + wm1;
    double w2 = w * w;
    return -(2.0 / 3.0) * w2 * w - w2 - 2.0 * w - 2.0 * std::log(wm1) + t_offset;
  }
};

struct GeodesicSample {
  double r;
  double tau;
  double t;
  double r_star;
};

struct GeodesicResult {
  std::vector<GeodesicSample> samples;
  bool truncated = false;   // r_end was clipped to the near-horizon cutoff
  double r_min_reached = 0.0;
};

inline constexpr double geodesic_r_min = 1.0 + 1e-6;

// Adaptive integration of the infall ODEs in the radial variable,
// sampled at the accepted steps. Closed forms above serve as the oracle.
inline GeodesicResult integrate_geodesic(double r_start, double r_end, double rel_tol = 1e-10,
                                         const InfallTrajectory& traj = {}) {
  if (!(r_end > 1.0) || !(r_start > r_end))
    throw std::domain_error("integrate_geodesic: need 1 < r_end < r_start");
  GeodesicResult out;
  if (r_end < geodesic_r_min) {
    out.truncated = true;
    r_end = geodesic_r_min;
  }

  // March in s = r_start - r so the independent variable increases.
  auto rhs = [&](double s, const std::vector<double>& y, std::vector<double>& dy) {
    (void)y;
    double r = r_start - s;
    double sq = std::sqrt(r);
    dy[0] = sq;
    dy[1] = r * sq / (r - 1.0);
  };
  std::vector<double> y = {traj.proper_time_at(r_start), traj.coordinate_time_at(r_start)};

  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * 1e-2;
  integrate_dp54(rhs, y, 0.0, r_start - r_end, opt,
                 [&](double s, const std::vector<double>& st) {
                   double r = r_start - s;
                   out.samples.push_back({r, st[0], st[1], tortoise(r)});
                 });
  out.r_min_reached = r_end;
  return out;
}

// Uniformly accelerated worldline in flat space (c = 1 internally unless an
// explicit c is passed): t = (c/a) sinh(a tau / c), z = (c^2/a) cosh(a tau / c).
struct AcceleratedWorldline {
  double a;
  double c = 1.0;

  AcceleratedWorldline(double accel, double light_speed = 1.0) : a(accel), c(light_speed) {
    if (!(a > 0.0)) throw std::domain_error("AcceleratedWorldline: a must be > 0");
    if (!(c > 0.0)) throw std::domain_error("AcceleratedWorldline: c must be > 0");
  }

  struct Event {
    double t;
    double z;
  };

  Event at(double tau) const {
    double phase = a * tau / c;
    return {c / a * std::sinh(phase), c * c / a * std::cosh(phase)};
  }

  double velocity(double tau) const { return c * std::tanh(a * tau / c); }
};

inline AcceleratedWorldline::Event accelerated_event(double a, double tau, double c = 1.0) {
  return AcceleratedWorldline(a, c).at(tau);
}

// Rindler wedge coordinates (t_bar, z_bar) to Minkowski (t, z):
//   t = (z_bar/c) sinh(a_bar t_bar / c), z = z_bar cosh(a_bar t_bar / c).
// A static z_bar curve is the a = c^2/z_bar hyperbola with tau = a_bar t_bar z_bar / c^2.
inline AcceleratedWorldline::Event rindler_to_minkowski(double t_bar, double z_bar, double a_bar,
                                                        double c = 1.0) {
  if (!(z_bar > 0.0)) throw std::domain_error("rindler_to_minkowski: z_bar must be > 0");
  double phase = a_bar * t_bar / c;
  return {z_bar / c * std::sinh(phase), z_bar * std::cosh(phase)};
}

}  // namespace hbar
