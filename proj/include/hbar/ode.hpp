#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hbar {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double max_dt = 0.0;           // 0 = unlimited
  double initial_dt = 0.0;       // 0 = auto
  std::size_t max_steps = 50'000'000;
  // Optional acceptance veto for a proposed state (e.g. positivity). A vetoed
  // step is retried with half the step size.
  std::function<bool(const std::vector<double>&)> accept;
};

struct OdeStats {
  std::size_t steps = 0;
  std::size_t rejects = 0;
};

// Dormand-Prince 5(4) embedded pair with standard step-size control.
// Integrates y' = f(s, y) from s0 to s1 in place; optionally reports each
// accepted step through `observer(s, y)`.
template <typename Rhs>
OdeStats integrate_dp54(
    Rhs&& rhs, std::vector<double>& y, double s0, double s1,
    const OdeOptions& opt = {},
    const std::function<void(double, const std::vector<double>&)>& observer = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  OdeStats stats;
  if (s1 == s0) {
    if (observer) observer(s0, y);
    return stats;
  }
  const double dir = (s1 > s0) ? 1.0 : -1.0;
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);

  rhs(s0, y, k1);
  double span = std::abs(s1 - s0);
  double h = opt.initial_dt > 0.0 ? opt.initial_dt : span / 100.0;
  if (opt.max_dt > 0.0) h = std::min(h, opt.max_dt);
  h = std::min(h, span);

  double s = s0;
  if (observer) observer(s, y);

  // k1 always holds f(s, y) at the top of the loop (FSAL: reuse stage 7).
  while (dir * (s1 - s) > 0.0) {
    if (stats.steps + stats.rejects > opt.max_steps)
      throw std::runtime_error("integrate_dp54: step budget exhausted");
    h = std::min(h, std::abs(s1 - s));
    const double hd = dir * h;

    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hd * a21 * k1[i];
    rhs(s + c2 * hd, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
    rhs(s + c3 * hd, yt, k3);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(s + c4 * hd, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(s + c5 * hd, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(s + hd, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(s + hd, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double q = e / sc;
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(n));

    bool ok = err <= 1.0;
    if (ok && opt.accept && !opt.accept(ynew)) {
      ok = false;
      err = std::max(err, 16.0);  // force a real step-size cut
    }
    if (ok) {
      s += hd;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.steps;
      if (observer) observer(s, y);
    } else {
      ++stats.rejects;
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (opt.max_dt > 0.0) h = std::min(h, opt.max_dt);
    if (!(h > 0.0) || s + dir * h == s)
      throw std::runtime_error("integrate_dp54: step size underflow");
  }
  return stats;
}

}  // namespace hbar
