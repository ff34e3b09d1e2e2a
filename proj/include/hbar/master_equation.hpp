#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hbar/black_hole.hpp"
#include "hbar/excitation.hpp"
#include "hbar/ode.hpp"

namespace hbar {

// Emission/absorption rates of the field mode under a Poissonian beam of
// injected atoms: Gamma_{e,a} = r (g^2/omega^2) R e^{-+xi}, R = xi/sinh(xi).
// Detailed balance Gamma_a = e^{2 xi} Gamma_e is built in.
struct ModeKinetics {
  double xi = 0.0;
  double R = 1.0;
  double Gamma_e = 0.0;
  double Gamma_a = 0.0;
  double injection_rate_r = 0.0;
  double kappa_leak = 0.0;
};

inline ModeKinetics mode_rates(const AtomSpec& atom, const ModeSpec& mode,
                               double injection_rate_r, double kappa_leak = 0.0) {
  atom.validate();
  mode.validate();
  if (!(injection_rate_r > 0.0))
    throw std::domain_error("mode_rates: injection_rate_r must be > 0");
  if (kappa_leak < 0.0) throw std::domain_error("mode_rates: kappa_leak must be >= 0");
  double xi = mode.xi();
  if (!(xi > 0.0)) throw std::domain_error("mode_rates: xi must be > 0 (degenerate mode)");
  ModeKinetics k;
  k.xi = xi;
  k.R = xi / std::sinh(xi);
  double pref = injection_rate_r * mode.g * mode.g / (atom.omega * atom.omega);
  // R e^{-xi} = 2 xi / (e^{2 xi} - 1), R e^{+xi} = 2 xi / (1 - e^{-2 xi}):
  // overflow-free for large xi.
  k.Gamma_e = pref * 2.0 * xi / std::expm1(2.0 * xi);
  k.Gamma_a = pref * 2.0 * xi / (-std::expm1(-2.0 * xi));
  k.injection_rate_r = injection_rate_r;
  k.kappa_leak = kappa_leak;
  return k;
}

// Mean occupation of the thermal steady state, n = 1/(e^{2 xi} - 1).
inline double planck_occupation(double xi) {
  if (!(xi > 0.0)) throw std::domain_error("planck_occupation: xi must be > 0");
  return 1.0 / std::expm1(2.0 * xi);
}

// Diagonal density matrix of one field mode, truncated at level N.
// leaked_mass records probability removed by any non-conserving channel;
// the kappa generator below conserves probability, so it stays 0 and the
// outflow bookkeeping lives in leaked_photons = integral of kappa * n(t) dt.
struct FockPopulations {
  std::vector<double> p;
  double leaked_mass = 0.0;
  double leaked_photons = 0.0;

  int truncation_level() const { return static_cast<int>(p.size()) - 1; }

  double total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) s += static_cast<double>(n) * p[n];
    return s;
  }

  // S/k_B = -sum p_n ln p_n with 0 ln 0 = 0; entries below 1e-300 skipped.
  double entropy_kB() const {
    double s = 0.0;
    for (double v : p)
      if (v > 1e-300) s -= v * std::log(v);
    return s;
  }
};

inline FockPopulations vacuum_state(int levels) {
  if (levels < 1) throw std::domain_error("vacuum_state: need at least 1 level");
  FockPopulations f;
  f.p.assign(static_cast<std::size_t>(levels) + 1, 0.0);
  f.p[0] = 1.0;
  return f;
}

// Truncation policy for a thermal tail: p_N ~ e^{-2 xi N} below tail_tol.
inline int thermal_truncation_level(double xi, double tail_tol = 1e-12) {
  if (!(xi > 0.0)) throw std::domain_error("thermal_truncation_level: xi must be > 0");
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
    throw std::domain_error("thermal_truncation_level: tail_tol in (0,1)");
  return std::max(20, static_cast<int>(std::ceil(-std::log(tail_tol) / (2.0 * xi))));
}

// Geometric distribution p_n = q^n (1 - q), truncated without
// renormalization. The stationary state of the birth-death generator with
// rates Gamma_e (up) and Gamma_a + kappa (down) is exactly this with
// q = Gamma_e / (Gamma_a + kappa).
inline FockPopulations geometric_state_levels(double q, int levels) {
  if (!(q > 0.0) || !(q < 1.0))
    throw std::domain_error("geometric_state_levels: q must be in (0,1)");
  if (levels < 1) throw std::domain_error("geometric_state_levels: need at least 1 level");
  FockPopulations f;
  f.p.resize(static_cast<std::size_t>(levels) + 1);
  double v = 1.0 - q;
  for (auto& pn : f.p) {
    pn = v;
    v *= q;
  }
  return f;
}

inline int geometric_truncation_level(double q, double tail_tol = 1e-12) {
  if (!(q > 0.0) || !(q < 1.0))
    throw std::domain_error("geometric_truncation_level: q must be in (0,1)");
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
    throw std::domain_error("geometric_truncation_level: tail_tol in (0,1)");
  return std::max(20, static_cast<int>(std::ceil(std::log(tail_tol) / std::log(q))));
}

// Thermal steady state p_n = e^{-2 xi n} (1 - e^{-2 xi}), geometric truncation
// without renormalization (the missing tail is e^{-2 xi (N+1)}).
inline FockPopulations steady_state_levels(double xi, int levels) {
  if (!(xi > 0.0)) throw std::domain_error("steady_state_levels: xi must be > 0");
  if (levels < 1) throw std::domain_error("steady_state_levels: need at least 1 level");
  FockPopulations f = geometric_state_levels(std::exp(-2.0 * xi), levels);
  // Rebuild p_0 from expm1 so the normalization is exact for tiny xi.
  double norm = -std::expm1(-2.0 * xi);
  double q = std::exp(-2.0 * xi);
  double v = norm;
  for (auto& pn : f.p) {
    pn = v;
    v *= q;
  }
  return f;
}

inline FockPopulations steady_state(double xi, double tail_tol = 1e-12) {
  return steady_state_levels(xi, thermal_truncation_level(xi, tail_tol));
}

namespace detail {

// Birth-death generator of Eq. (u3) plus the kappa leakage channel, with a
// reflecting cap at N (the emission term out of level N is dropped so the
// truncated generator conserves probability exactly).
inline void apply_generator(const ModeKinetics& k, const std::vector<double>& p,
                            std::vector<double>& pdot, std::size_t n_levels) {
  const double ge = k.Gamma_e;
  const double gd = k.Gamma_a + k.kappa_leak;
  const std::size_t N = n_levels - 1;
  for (std::size_t n = 0; n < n_levels; ++n) {
    double v = 0.0;
    if (n > 0) v += ge * static_cast<double>(n) * p[n - 1];
    double out = gd * static_cast<double>(n);
    if (n < N) out += ge * static_cast<double>(n + 1);
    v -= out * p[n];
    if (n < N) v += gd * static_cast<double>(n + 1) * p[n + 1];
    pdot[n] = v;
  }
}

}  // namespace detail

// L_inf of the generator applied to p.
inline double stationarity_residual(const FockPopulations& f, const ModeKinetics& k) {
  if (f.p.empty()) throw std::domain_error("stationarity_residual: empty populations");
  std::vector<double> pdot(f.p.size());
  detail::apply_generator(k, f.p, pdot, f.p.size());
  double m = 0.0;
  for (double v : pdot) m = std::max(m, std::abs(v));
  return m;
}

struct EvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double tail_threshold = 1e-10;  // regrow when p_N exceeds this
  int max_regrows = 12;
  int samples = 0;                // >0: record this many evenly spaced rows (plus t=0)
  int checkpoints = 64;           // tail checks per run at minimum
};

struct EvolveSample {
  double t;
  double n_mean;
  double entropy_kB;
  double residual;
  double total_prob;
};

struct EvolveResult {
  FockPopulations state;
  std::vector<EvolveSample> samples;
  std::size_t steps = 0;
  std::size_t rejects = 0;
  int regrows = 0;
};

// Adaptive DP54 integration of the truncated master equation. The state
// vector carries leaked_photons as a trailing component so the photon
// outflow integral shares the integrator's accuracy. Steps proposing
// populations below -1e-12 are rejected and retried smaller; the step size
// is capped by the positivity bound 1/(2 (Gamma_a + kappa + Gamma_e)(N+1)).
inline EvolveResult evolve(const FockPopulations& p0, const ModeKinetics& k, double t_final,
                           const EvolveOptions& opt = {}) {
  if (p0.p.empty()) throw std::domain_error("evolve: empty populations");
  if (t_final < 0.0) throw std::domain_error("evolve: t_final must be >= 0");

  EvolveResult out;
  out.state = p0;
  auto record = [&](double t) {
    double res = stationarity_residual(out.state, k);
    out.samples.push_back({t, out.state.mean(), out.state.entropy_kB(), res,
                           out.state.total()});
  };
  if (t_final == 0.0) {
    if (opt.samples > 0) record(0.0);
    return out;
  }

  // Segment boundaries are the union of sample times and tail checkpoints;
  // with samples requested, checkpoints are a refinement of the sample grid.
  int per_sample = 1;
  int nseg = std::max(opt.checkpoints, 1);
  if (opt.samples > 0) {
    per_sample = std::max(1, (opt.checkpoints + opt.samples - 1) / opt.samples);
    nseg = opt.samples * per_sample;
  }
  std::vector<double> y(out.state.p);
  y.push_back(out.state.leaked_photons);

  if (opt.samples > 0) record(0.0);

  double t = 0.0;
  for (int seg = 1; seg <= nseg; ++seg) {
    double t_to = t_final * seg / nseg;

    auto rhs = [&](double, const std::vector<double>& yy, std::vector<double>& dyy) {
      std::size_t nl = yy.size() - 1;
      detail::apply_generator(k, yy, dyy, nl);
      double nbar = 0.0;
      for (std::size_t n = 1; n < nl; ++n) nbar += static_cast<double>(n) * yy[n];
      dyy[nl] = k.kappa_leak * nbar;
    };

    OdeOptions oo;
    oo.rel_tol = opt.rel_tol;
    oo.abs_tol = opt.abs_tol;
    oo.max_dt = 0.5 / ((k.Gamma_a + k.kappa_leak + k.Gamma_e) * static_cast<double>(y.size()));
    oo.accept = [](const std::vector<double>& yy) {
      for (std::size_t i = 0; i + 1 < yy.size(); ++i)
        if (yy[i] < -1e-12) return false;
      return true;
    };
    OdeStats st = integrate_dp54(rhs, y, t, t_to, oo);
    out.steps += st.steps;
    out.rejects += st.rejects;
    t = t_to;

    out.state.p.assign(y.begin(), y.end() - 1);
    out.state.leaked_photons = y.back();

    if (opt.samples > 0 && seg % per_sample == 0) record(t_to);

    if (out.state.p.back() > opt.tail_threshold && seg < nseg) {
      if (out.regrows >= opt.max_regrows)
        throw std::runtime_error("evolve: truncation level regrowth budget exhausted");
      std::size_t n_old = out.state.p.size();
      std::size_t n_new = n_old + std::max<std::size_t>(n_old / 2, 8);
      out.state.p.resize(n_new, 0.0);
      y.assign(out.state.p.begin(), out.state.p.end());
      y.push_back(out.state.leaked_photons);
      ++out.regrows;
    }
  }
  return out;
}

namespace detail {

// Dense matrix exponential by scaling and squaring with a Taylor kernel;
// only used at master-equation truncation sizes (N ~ tens), where it serves
// as the independent cross-check of the adaptive stepper.
inline std::vector<double> expm_dense(std::vector<double> a, std::size_t n) {
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a[i * n + j]);
    norm = std::max(norm, row);
  }
  int s = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++s;
  }
  for (auto& v : a) v = std::ldexp(v, -s);

  std::vector<double> e(n * n, 0.0), term(a), tmp(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  for (std::size_t i = 0; i < n * n; ++i) e[i] += term[i];
  for (int kk = 2; kk <= 40; ++kk) {
    // term <- term * a / kk
    double tn = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < n; ++l) v += term[i * n + l] * a[l * n + j];
        v /= kk;
        tmp[i * n + j] = v;
        tn = std::max(tn, std::abs(v));
      }
    term.swap(tmp);
    for (std::size_t i = 0; i < n * n; ++i) e[i] += term[i];
    if (tn < 1e-19) break;
  }
  for (int r = 0; r < s; ++r) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < n; ++l) v += e[i * n + l] * e[l * n + j];
        tmp[i * n + j] = v;
      }
    e.swap(tmp);
  }
  return e;
}

}  // namespace detail

// Exact propagation over the truncated generator via the matrix exponential
// (fixed truncation from p0; no regrowth).
inline FockPopulations evolve_expm(const FockPopulations& p0, const ModeKinetics& k,
                                   double t_final) {
  if (p0.p.empty()) throw std::domain_error("evolve_expm: empty populations");
  if (t_final < 0.0) throw std::domain_error("evolve_expm: t_final must be >= 0");
  const std::size_t n = p0.p.size();
  std::vector<double> gen(n * n, 0.0);
  std::vector<double> col(n), pdot(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[j] = 1.0;
    detail::apply_generator(k, col, pdot, n);
    for (std::size_t i = 0; i < n; ++i) gen[i * n + j] = pdot[i] * t_final;
  }
  std::vector<double> e = detail::expm_dense(std::move(gen), n);
  FockPopulations out = p0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) v += e[i * n + j] * p0.p[j];
    out.p[i] = v;
  }
  return out;
}

// [2 xi] / [hbar nu_SI / (k_B T_BH)]; identically 1 (the steady state is
// thermal at exactly the Hawking temperature), computed through the SI path.
inline double hawking_temperature_equivalence(const ModeSpec& mode, const BlackHole& bh,
                                              const Constants& k = codata2018) {
  mode.validate();
  double nu_si = bh.units(k).frequency_to_si(mode.nu);
  double boltzmann_exponent = k.hbar * nu_si / (k.k_B * bh.T_H_K);
  return mode.xi() * 2.0 / boltzmann_exponent;
}

}  // namespace hbar
