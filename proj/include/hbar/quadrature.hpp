#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hbar/constants.hpp"

namespace hbar {

// Tolerances and regulator ladder for the oscillatory integrals
//   I = \int_0^inf e^{i theta(x)} dx,
// evaluated as lim_{eps->0} \int_0^inf e^{i theta(x)} e^{-eps x} dx.
// The limit is taken by polynomial extrapolation of the regulated values
// over eps_ladder down to eps = 0 (the regulated integral is analytic in
// eps around 0 once the oscillation is faster than the decay).
struct QuadratureConfig {
  std::vector<double> eps_ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  double x_max = 0.0;     // 0 = adaptive from the tail bound e^{-eps x_max}/eps < abs_tol/10
  double abs_tol = 1e-10;
  double rel_tol = 1e-6;

  void validate() const {
    if (eps_ladder.size() < 2)
      throw std::domain_error("QuadratureConfig: eps_ladder needs at least 2 entries");
    double prev = 0.0;
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
      if (!(eps_ladder[i] > 0.0))
        throw std::domain_error("QuadratureConfig: eps_ladder entries must be > 0");
      if (i > 0 && !(eps_ladder[i] < prev))
        throw std::domain_error("QuadratureConfig: eps_ladder must be strictly decreasing");
      prev = eps_ladder[i];
    }
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::domain_error("QuadratureConfig: tolerances must be > 0");
    if (x_max < 0.0) throw std::domain_error("QuadratureConfig: x_max must be >= 0");
  }
};

struct OscillatoryResult {
  std::complex<double> value{0.0, 0.0};
  double err_estimate = 0.0;   // absolute, from the extrapolation table
  bool converged = false;
};

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr int gl_n = 15;
inline constexpr double gl_x[gl_n] = {
    -9.87992518020485377e-01, -9.37273392400705951e-01, -8.48206583410427206e-01,
    -7.24417731360170070e-01, -5.70972172608538830e-01, -3.94151347077563385e-01,
    -2.01194093997434514e-01, 0.0,                      2.01194093997434514e-01,
    3.94151347077563385e-01,  5.70972172608538830e-01,  7.24417731360170070e-01,
    8.48206583410427206e-01,  9.37273392400705951e-01,  9.87992518020485377e-01};
inline constexpr double gl_w[gl_n] = {
    3.07532419961186465e-02, 7.03660474881080689e-02, 1.07159220467171773e-01,
    1.39570677926153908e-01, 1.66269205816993781e-01, 1.86161000015561878e-01,
    1.98431485327111246e-01, 2.02578241925560898e-01, 1.98431485327111246e-01,
    1.86161000015561878e-01, 1.66269205816993781e-01, 1.39570677926153908e-01,
    1.07159220467171773e-01, 7.03660474881080689e-02, 3.07532419961186465e-02};

// One regulated integral at fixed eps. The phase model supplies theta(x) and
// an upper bound on |theta'(y)| for y >= x, nonincreasing in x; panels are
// sized to at most ~pi of accumulated phase so GL15 resolves them to near
// machine precision.
template <typename Phase>
std::complex<double> regulated_integral(const Phase& ph, double eps, const QuadratureConfig& cfg) {
  double x_max = cfg.x_max > 0.0
                     ? cfg.x_max
                     : std::log(10.0 / (eps * cfg.abs_tol)) / eps;

  std::complex<double> acc{0.0, 0.0};
  const std::complex<double> iu{0.0, 1.0};

  // (0, x_split]: substitute x = e^u; the integrand e^u e^{i theta(e^u)} decays
  // like e^u toward u -> -inf, turning the log-singular endpoint into a
  // smooth exponentially damped oscillation.
  const double x_split = std::min(1.0, x_max);
  const double u_lo = std::log(cfg.abs_tol) - 3.0;  // tail mass <= e^{u_lo} < abs_tol/20
  double u = u_lo;
  const double u_hi = std::log(x_split);
  while (u < u_hi) {
    double x_right = std::exp(std::min(u + 1.0, u_hi));
    double h = std::min(1.0, pi / (x_right * ph.freq_bound(x_right) + 1.0));
    double u2 = std::min(u + h, u_hi);
    double mid = 0.5 * (u + u2), half = 0.5 * (u2 - u);
    std::complex<double> panel{0.0, 0.0};
    for (int i = 0; i < gl_n; ++i) {
      double ui = mid + half * gl_x[i];
      double x = std::exp(ui);
      panel += gl_w[i] * x * std::exp(-eps * x) * std::exp(iu * ph.phase(x));
    }
    acc += half * panel;
    u = u2;
  }

  // [x_split, x_max]: direct panels, width pi / (local frequency bound).
  double x = x_split;
  while (x < x_max) {
    double h = pi / std::max(ph.freq_bound(x), 1e-3);
    double x2 = std::min(x + h, x_max);
    double mid = 0.5 * (x + x2), half = 0.5 * (x2 - x);
    std::complex<double> panel{0.0, 0.0};
    for (int i = 0; i < gl_n; ++i) {
      double xi = mid + half * gl_x[i];
      panel += gl_w[i] * std::exp(-eps * xi) * std::exp(iu * ph.phase(xi));
    }
    acc += half * panel;
    x = x2;
  }
  return acc;
}

}  // namespace detail

// Neville extrapolation of the regulated values to eps = 0, with the error
// estimated from the last column differences of the table.
template <typename Phase>
OscillatoryResult oscillatory_integral(const Phase& ph, const QuadratureConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.eps_ladder.size();
  std::vector<std::complex<double>> tbl(m);
  for (std::size_t j = 0; j < m; ++j)
    tbl[j] = detail::regulated_integral(ph, cfg.eps_ladder[j], cfg);

  std::vector<double> e(cfg.eps_ladder);
  std::complex<double> prev_diag = tbl[0];
  for (std::size_t k = 1; k < m; ++k) {
    prev_diag = tbl[0];
    for (std::size_t j = 0; j + k < m; ++j) {
      tbl[j] = (e[j] * tbl[j + 1] - e[j + k] * tbl[j]) / (e[j] - e[j + k]);
    }
  }

  OscillatoryResult res;
  res.value = tbl[0];
  res.err_estimate = std::abs(tbl[0] - prev_diag) + std::abs(tbl[0] - tbl[1]);
  res.converged =
      res.err_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
  return res;
}

}  // namespace hbar
