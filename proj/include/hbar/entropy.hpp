#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hbar/black_hole.hpp"
#include "hbar/master_equation.hpp"

namespace hbar {

// Von Neumann entropy of the diagonal state, in units of k_B.
inline double von_neumann_entropy(const FockPopulations& f) {
  if (f.p.empty()) throw std::domain_error("von_neumann_entropy: empty populations");
  return f.entropy_kB();
}

// Closed-form entropy of the thermal state at xi:
// S/k_B = (n+1) ln(n+1) - n ln n with n = 1/(e^{2 xi} - 1).
inline double thermal_entropy_kB(double xi) {
  double n = planck_occupation(xi);
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

// Full instantaneous entropy rate -sum pdot_n ln p_n (units k_B per unit
// time). Entries with p_n below the entropy clamp are skipped.
inline double entropy_rate_full(const FockPopulations& f, const std::vector<double>& p_dot) {
  if (f.p.size() != p_dot.size())
    throw std::domain_error("entropy_rate_full: size mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < f.p.size(); ++n)
    if (f.p[n] > 1e-300) s -= p_dot[n] * std::log(f.p[n]);
  return s;
}

struct EntropyRateResult {
  double sum_form = 0.0;      // -sum pdot_n ln p_n^{SS}
  double reduced_form = 0.0;  // 2 xi dn/dt
  bool near_steady = false;   // input passed the distance gate
  bool reduced_valid = false; // sum pdot = 0 held, so the const term dropped
};

// Quasi-steady entropy rate: -k_B sum pdot_n ln p_n^{SS} with
// ln p_n^{SS} = -2 xi n + ln(1 - e^{-2 xi}); when sum pdot_n = 0 the constant
// drops and the rate reduces to 2 xi k_B dn/dt. Both forms are returned;
// callers should trust them only when near_steady holds.
inline EntropyRateResult entropy_rate_steady(const FockPopulations& f,
                                             const std::vector<double>& p_dot, double xi,
                                             double near_threshold = 1e-3) {
  if (!(xi > 0.0)) throw std::domain_error("entropy_rate_steady: xi must be > 0");
  if (f.p.size() != p_dot.size())
    throw std::domain_error("entropy_rate_steady: size mismatch");

  double log_norm = std::log(-std::expm1(-2.0 * xi));
  double sum = 0.0, n_dot = 0.0, trace_dot = 0.0;
  for (std::size_t n = 0; n < p_dot.size(); ++n) {
    sum -= p_dot[n] * (-2.0 * xi * static_cast<double>(n) + log_norm);
    n_dot += static_cast<double>(n) * p_dot[n];
    trace_dot += p_dot[n];
  }

  EntropyRateResult r;
  r.sum_form = sum;
  r.reduced_form = 2.0 * xi * n_dot;

  FockPopulations ss = steady_state_levels(xi, f.truncation_level());
  double dist = 0.0;
  for (std::size_t n = 0; n < f.p.size(); ++n)
    dist = std::max(dist, std::abs(f.p[n] - ss.p[n]));
  r.near_steady = dist < near_threshold;

  double scale = 0.0;
  for (double v : p_dot) scale = std::max(scale, std::abs(v));
  r.reduced_valid = std::abs(trace_dot) <= 1e-9 * std::max(scale, 1e-300);
  return r;
}

// Per-mode photon flux away from the cavity, dimensionless units.
struct ModeFlux {
  double nu;
  double n_dot;
};

struct FluxLedger {
  std::vector<ModeFlux> modes;
};

// HBAR entropy flux, dimensionless route: S_dot/k_B = 2 sum_nu xi_nu n_dot_nu
// per unit dimensionless time.
inline double hbar_entropy_flux(const FluxLedger& ledger) {
  double s = 0.0;
  for (const auto& m : ledger.modes) {
    if (!(m.nu > 0.0)) throw std::domain_error("hbar_entropy_flux: nu must be > 0");
    if (m.n_dot < 0.0) throw std::domain_error("hbar_entropy_flux: n_dot must be >= 0");
    s += 2.0 * (2.0 * pi * m.nu) * m.n_dot;
  }
  return s;
}

// Same flux through the SI route: S_dot = (4 pi k_B r_g / c) sum nu_SI n_dot_SI,
// in J K^-1 s^-1.
inline double hbar_entropy_flux_si(const FluxLedger& ledger, const BlackHole& bh,
                                   const Constants& k = codata2018) {
  UnitSystem u = bh.units(k);
  double s = 0.0;
  for (const auto& m : ledger.modes) {
    if (!(m.nu > 0.0)) throw std::domain_error("hbar_entropy_flux_si: nu must be > 0");
    if (m.n_dot < 0.0) throw std::domain_error("hbar_entropy_flux_si: n_dot must be >= 0");
    s += u.frequency_to_si(m.nu) * u.rate_to_si(m.n_dot);
  }
  return 4.0 * pi * k.k_B * bh.r_g_m / k.c * s;
}

// Mass-equivalent power of the photon flux: m_dot c^2 = hbar sum nu_SI n_dot_SI.
inline double photon_mass_rate_si(const FluxLedger& ledger, const BlackHole& bh,
                                  const Constants& k = codata2018) {
  UnitSystem u = bh.units(k);
  double power = 0.0;
  for (const auto& m : ledger.modes)
    power += k.hbar * u.frequency_to_si(m.nu) * u.rate_to_si(m.n_dot);
  return power / (k.c * k.c);
}

struct AreaLawResult {
  double m_dot_p;          // kg/s (or natural)
  double A_dot_p;          // m^2/s
  double S_dot_from_area;  // J K^-1 s^-1
  double S_dot_flux;       // J K^-1 s^-1
  double rel_residual;
};

// Entropy/area relation through two independent routes: the direct mode-sum
// flux and the mass-rate -> area-rate -> (k_B c^3 / 4 hbar G) A_dot chain.
// The two are algebraically identical; disagreement beyond 1e-10 relative is
// a code defect and throws.
inline AreaLawResult area_rate_and_entropy_law(const FluxLedger& ledger, const BlackHole& bh,
                                               const Constants& k = codata2018) {
  AreaLawResult r;
  r.m_dot_p = photon_mass_rate_si(ledger, bh, k);
  r.A_dot_p = 32.0 * pi * k.G * k.G * bh.mass_kg * r.m_dot_p / (k.c * k.c * k.c * k.c);
  r.S_dot_from_area = k.k_B * k.c * k.c * k.c / (4.0 * k.hbar * k.G) * r.A_dot_p;
  r.S_dot_flux = hbar_entropy_flux_si(ledger, bh, k);
  double scale = std::max(std::abs(r.S_dot_from_area), std::abs(r.S_dot_flux));
  r.rel_residual = scale > 0.0 ? std::abs(r.S_dot_from_area - r.S_dot_flux) / scale : 0.0;
  if (r.rel_residual > 1e-10)
    throw std::logic_error("area_rate_and_entropy_law: routes disagree beyond 1e-10");
  return r;
}

struct MassBudget {
  double M_dot;
  double A_dot_total;
  double A_dot_atom;
  double A_dot_p;
};

// Area bookkeeping: A_dot = (2 m_dot / M) A per contribution, additive.
inline MassBudget mass_budget(double m_dot_atom, const FluxLedger& ledger, const BlackHole& bh,
                              const Constants& k = codata2018) {
  MassBudget b;
  double m_dot_p = photon_mass_rate_si(ledger, bh, k);
  b.M_dot = m_dot_atom + m_dot_p;
  double per_mass = 2.0 * bh.area_m2 / bh.mass_kg;
  b.A_dot_atom = per_mass * m_dot_atom;
  b.A_dot_p = per_mass * m_dot_p;
  b.A_dot_total = per_mass * b.M_dot;
  return b;
}

}  // namespace hbar
