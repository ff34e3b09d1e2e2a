#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "hbar/complex_gamma.hpp"
#include "hbar/constants.hpp"
#include "hbar/quadrature.hpp"
#include "hbar/trajectory.hpp"

namespace hbar {

// Outgoing field mode. Frequencies are dimensionless (units c/r_g);
// xi = 2 pi nu is the Boltzmann exponent scale of the thermal results.
struct ModeSpec {
  double nu;
  int ell = 0;
  double g = 1.0;

  double xi() const { return 2.0 * pi * nu; }

  void validate() const {
    if (!(nu > 0.0)) throw std::domain_error("ModeSpec: nu must be > 0 (Planck factor singular)");
    if (ell < 0) throw std::domain_error("ModeSpec: ell must be >= 0");
    if (!(g > 0.0)) throw std::domain_error("ModeSpec: g must be > 0");
  }
};

struct AtomSpec {
  double omega;

  void validate() const {
    if (!(omega > 0.0)) throw std::domain_error("AtomSpec: omega must be > 0");
  }
  // The closed forms assume omega >> 1 and omega >> nu.
  bool asymptotic_regime(const ModeSpec& mode) const {
    return omega >= 10.0 && omega >= 10.0 * mode.nu;
  }
};

// First-order perturbation theory is strained once probabilities approach 1.
inline constexpr double perturbative_limit = 0.1;

struct PhiValue {
  double value;
  bool log_singular;  // x = 0: phi -> -inf
};

// phi(x) = x/omega + w^2 + 2w + 2 ln(w - 1) with w = (1 + 3x/2omega)^{1/3},
// evaluated through t = log1p(3x/2omega)/3 so w - 1 = expm1(t) stays
// accurate near x = 0.
inline PhiValue phase_phi(double x, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("phase_phi: omega must be > 0");
  if (x < 0.0) throw std::domain_error("phase_phi: x must be >= 0");
  if (x == 0.0) return {-std::numeric_limits<double>::infinity(), true};
  double t = std::log1p(1.5 * x / omega) / 3.0;
  double w = std::exp(t);
  double wm1 = std::expm1(t);
  return {x / omega + w * w + 2.0 * w + 2.0 * std::log(wm1), false};
}

// d phi / dx = (1/omega) w / (w - 1), positive and strictly decreasing.
inline double phase_phi_derivative(double x, double omega) {
  if (!(x > 0.0)) throw std::domain_error("phase_phi_derivative: x must be > 0");
  double t = std::log1p(1.5 * x / omega) / 3.0;
  return std::exp(t) / (omega * std::expm1(t));
}

// Leading behaviour for omega >> 1 at fixed x: phi ~ 3 + 2 ln(x/2omega) + 2x/omega.
inline double phase_phi_asymptotic(double x, double omega) {
  if (!(x > 0.0) || !(omega > 0.0))
    throw std::domain_error("phase_phi_asymptotic: x, omega must be > 0");
  return 3.0 + 2.0 * std::log(0.5 * x / omega) + 2.0 * x / omega;
}

namespace detail {

// Phase of the excitation (sign = -1) or absorption (sign = +1) integrand,
// theta(x) = sign * nu * phi(x) - x, for the engine's e^{i theta}.
struct InfallPhase {
  double omega, nu;
  double sign;

  double phase(double x) const {
    return sign * nu * phase_phi(x, omega).value - x;
  }
  // Nonincreasing upper bound for |theta'| on [x, inf).
  double freq_bound(double x) const { return 1.0 + nu * phase_phi_derivative(x, omega); }
};

// Pure-log benchmark phase theta(x) = sign * 2 nu ln x - x, whose integral has
// the closed form -pi e^{-pi nu} / (sinh(2 pi nu) Gamma(2 i nu)) (emission sign).
struct LogPhase {
  double nu;
  double sign;

  double phase(double x) const { return sign * 2.0 * nu * std::log(x) - x; }
  double freq_bound(double x) const { return 1.0 + 2.0 * nu / x; }
};

// Same phase as InfallPhase but assembled from the worldline closed forms:
// theta(x) = omega tau(r(x)) + nu [t(r(x)) - r*(r(x))], r(x) = (1 + 3x/2omega)^{2/3}.
// Exercises the trajectory-convention invariance (offsets enter as constants).
struct TrajectoryPhase {
  double omega, nu;
  InfallTrajectory traj;

  double phase(double x) const {
    double t3 = std::log1p(1.5 * x / omega) / 3.0;
    double wm1 = std::expm1(t3);
    double w = std::exp(t3);
    double tau = -(2.0 / 3.0) * w * w * w + traj.tau_offset;
    return omega * tau + nu * traj.retarded_phase_base_wm1(wm1);
  }
  double freq_bound(double x) const { return 1.0 + nu * phase_phi_derivative(x, omega); }
};

}  // namespace detail

struct ProbabilityResult {
  double value = 0.0;
  double err_estimate = 0.0;  // absolute, propagated from the amplitude
  bool converged = false;
  bool perturbative = true;   // value < perturbative_limit
};

enum class ClosedFormVariant { full, omega_dominant };

// Asymptotic closed form: P_exc = 4 pi g^2 nu / (omega^2 (1+2nu/omega)^2)
// * 1/(e^{4 pi nu} - 1); the omega_dominant variant drops the (1+2nu/omega)^2.
inline double excitation_probability_closed_form(
    const AtomSpec& atom, const ModeSpec& mode,
    ClosedFormVariant variant = ClosedFormVariant::full) {
  atom.validate();
  mode.validate();
  double pref = 4.0 * pi * mode.g * mode.g * mode.nu / (atom.omega * atom.omega);
  if (variant == ClosedFormVariant::full) {
    double corr = 1.0 + 2.0 * mode.nu / atom.omega;
    pref /= corr * corr;
  }
  return pref / std::expm1(4.0 * pi * mode.nu);
}

// Dimensional form (SI inputs): P_exc = 4 pi g^2 r_g nu / (c omega^2) /
// (e^{4 pi nu r_g / c} - 1), valid in the omega >> nu regime.
inline double excitation_probability_closed_form_si(double omega_si, double nu_si, double g_si,
                                                    double r_g_m, double c) {
  if (!(omega_si > 0.0) || !(nu_si > 0.0) || !(g_si > 0.0) || !(r_g_m > 0.0) || !(c > 0.0))
    throw std::domain_error("excitation_probability_closed_form_si: inputs must be > 0");
  double pref = 4.0 * pi * g_si * g_si * r_g_m * nu_si / (c * omega_si * omega_si);
  return pref / std::expm1(4.0 * pi * nu_si * r_g_m / c);
}

// Direct regulated quadrature of P = (g^2/omega^2) |I|^2 with
// I = \int_0^inf e^{-i nu phi(x)} e^{-i x} dx.
inline ProbabilityResult excitation_probability_numeric(const AtomSpec& atom,
                                                        const ModeSpec& mode,
                                                        const QuadratureConfig& cfg = {}) {
  atom.validate();
  mode.validate();
  detail::InfallPhase ph{atom.omega, mode.nu, -1.0};
  OscillatoryResult amp = oscillatory_integral(ph, cfg);
  double pref = mode.g * mode.g / (atom.omega * atom.omega);
  ProbabilityResult res;
  res.value = pref * std::norm(amp.value);
  res.err_estimate = pref * 2.0 * std::abs(amp.value) * amp.err_estimate;
  res.converged = amp.converged;
  res.perturbative = res.value < perturbative_limit;
  return res;
}

enum class ProbabilityMethod { numeric, closed };

// Absorption: nu -> -nu in the amplitude. Closed form is the exact
// detailed-balance image e^{4 pi nu} P_exc of the chosen closed form.
inline ProbabilityResult absorption_probability(const AtomSpec& atom, const ModeSpec& mode,
                                                ProbabilityMethod method,
                                                const QuadratureConfig& cfg = {}) {
  atom.validate();
  mode.validate();
  ProbabilityResult res;
  if (method == ProbabilityMethod::closed) {
    res.value = std::exp(4.0 * pi * mode.nu) * excitation_probability_closed_form(atom, mode);
    res.err_estimate = 0.0;
    res.converged = true;
  } else {
    detail::InfallPhase ph{atom.omega, mode.nu, +1.0};
    OscillatoryResult amp = oscillatory_integral(ph, cfg);
    double pref = mode.g * mode.g / (atom.omega * atom.omega);
    res.value = pref * std::norm(amp.value);
    res.err_estimate = pref * 2.0 * std::abs(amp.value) * amp.err_estimate;
    res.converged = amp.converged;
  }
  res.perturbative = res.value < perturbative_limit;
  return res;
}

// Probability assembled through the worldline functions themselves (same
// integrand up to the convention-dependent constant phase).
inline ProbabilityResult excitation_probability_trajectory_route(
    const AtomSpec& atom, const ModeSpec& mode, const InfallTrajectory& traj,
    const QuadratureConfig& cfg = {}) {
  atom.validate();
  mode.validate();
  detail::TrajectoryPhase ph{atom.omega, mode.nu, traj};
  OscillatoryResult amp = oscillatory_integral(ph, cfg);
  double pref = mode.g * mode.g / (atom.omega * atom.omega);
  ProbabilityResult res;
  res.value = pref * std::norm(amp.value);
  res.err_estimate = pref * 2.0 * std::abs(amp.value) * amp.err_estimate;
  res.converged = amp.converged;
  res.perturbative = res.value < perturbative_limit;
  return res;
}

// Benchmark kernel I(nu) = \int_0^inf x^{-2 i nu} e^{-i x} dx, whose exact
// magnitude is |I|^2 = 4 pi nu / (e^{4 pi nu} - 1).
inline std::complex<double> log_phase_kernel(double nu, const QuadratureConfig& cfg = {}) {
  if (!(nu > 0.0)) throw std::domain_error("log_phase_kernel: nu must be > 0");
  detail::LogPhase ph{nu, -1.0};
  return oscillatory_integral(ph, cfg).value;
}

inline double log_phase_kernel_magnitude_sq(double nu, const QuadratureConfig& cfg = {}) {
  return std::norm(log_phase_kernel(nu, cfg));
}

// Analytic magnitude of the benchmark kernel (the Planck factor).
inline double planck_magnitude_sq(double nu) {
  if (!(nu > 0.0)) throw std::domain_error("planck_magnitude_sq: nu must be > 0");
  return 4.0 * pi * nu / std::expm1(4.0 * pi * nu);
}

// Analytic complex value of the benchmark kernel (emission sign), from the
// Gamma-function evaluation of the integral.
inline std::complex<double> log_phase_kernel_closed(double nu) {
  if (!(nu > 0.0)) throw std::domain_error("log_phase_kernel_closed: nu must be > 0");
  std::complex<double> g = complex_gamma(std::complex<double>(0.0, 2.0 * nu));
  return -pi * std::exp(-pi * nu) / (std::sinh(2.0 * pi * nu) * g);
}

// Regge-Wheeler potential for the outgoing wave equation, used only as a
// diagnostic of the high-frequency (potential-free) approximation.
inline double effective_potential(double r, int ell) {
  if (!(r > 1.0)) throw std::domain_error("effective_potential: r must be > 1");
  if (ell < 0) throw std::domain_error("effective_potential: ell must be >= 0");
  double l2 = static_cast<double>(ell) * (ell + 1);
  return (1.0 - 1.0 / r) * (1.0 / (r * r * r) + l2 / (r * r));
}

struct PotentialPeak {
  double r_max;
  double V_max;
};

// Coarse scan + golden-section refinement of max_r V(r, ell).
inline PotentialPeak potential_peak(int ell, int scan_points = 2000) {
  if (ell < 0) throw std::domain_error("potential_peak: ell must be >= 0");
  double lo = 1.0 + 1e-9, hi = 20.0;
  double best_r = lo, best_v = 0.0;
  for (int i = 0; i <= scan_points; ++i) {
    double r = lo + (hi - lo) * i / scan_points;
    double v = effective_potential(r, ell);
    if (v > best_v) { best_v = v; best_r = r; }
  }
  double a = std::max(lo, best_r - (hi - lo) / scan_points);
  double b = std::min(hi, best_r + (hi - lo) / scan_points);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = effective_potential(c1, ell), f2 = effective_potential(c2, ell);
  while (b - a > 1e-13) {
    if (f1 > f2) {
      b = c2; c2 = c1; f2 = f1;
      c1 = b - gr * (b - a); f1 = effective_potential(c1, ell);
    } else {
      a = c1; c1 = c2; f1 = f2;
      c2 = a + gr * (b - a); f2 = effective_potential(c2, ell);
    }
  }
  double r = 0.5 * (a + b);
  return {r, effective_potential(r, ell)};
}

// Validity ratio of the high-frequency approximation for a mode.
inline double potential_validity_ratio(const ModeSpec& mode) {
  mode.validate();
  return potential_peak(mode.ell).V_max / (mode.nu * mode.nu);
}

}  // namespace hbar
