// Strang-split time integration of the singular Hartree flow
//   i psi_t = A psi + theta (w * |psi|^2) psi,
// alternating the exact phase flow of the nonlinearity with the Cayley
// (Crank-Nicolson) step of the linear part.  Both sub-steps are exact L^2
// isometries, so the discrete mass is conserved to roundoff; the energy is
// conserved to O(dt^2).
#pragma once

#include "sh2d/pointop.hpp"
#include "sh2d/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sh2d {

struct EvolutionConfig {
  int theta = 1;        // +1 defocusing, -1 focusing
  double dt = 1e-3;
  double T = 1.0;
  int record_every = 10;
  std::string scheme = "strang";

  void validate() const {
    if (theta != 1 && theta != -1)
      throw std::invalid_argument("EvolutionConfig: theta must be +1 or -1");
    if (!(dt > 0.0) || !(dt <= T))
      throw std::invalid_argument("EvolutionConfig: need 0 < dt <= T");
    if (record_every < 1)
      throw std::invalid_argument("EvolutionConfig: record_every >= 1");
    if (scheme != "strang")
      throw std::invalid_argument("EvolutionConfig: unknown scheme");
  }
};

struct EvolutionTrace {
  std::vector<double> times, mass, energy, h1alpha;
  bool blowup = false;
  Field final_state;
};

/// Cayley step (I - i(tau/2)A)(I + i(tau/2)A)^{-1} psi, evaluated through a
/// single resolvent at the complex frequency -2i/tau:
///   psi+ = (4/(i tau)) R_{-2i/tau} psi - psi.
/// Exactly norm-preserving since A is real-symmetric.
inline Field linear_step(const PointOpParams& p, const Field& psi, double tau) {
  if (tau == 0.0) throw std::invalid_argument("linear_step: tau must be nonzero");
  const cplx omega(0.0, -2.0 / tau);
  Field out = resolvent_apply(p, psi, omega);
  out *= cplx(0.0, -4.0 / tau);
  out -= psi;
  return out;
}

/// Exact flow of i psi_t = theta (w * |psi|^2) psi at frozen modulus:
/// a pure pointwise phase, so |psi| (and every L^p norm) is invariant.
inline Field nonlinear_step(const Potential& pot, const Field& psi, double tau,
                            int theta) {
  Field m = hartree_multiplier(pot, psi);
  Field out = psi;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double phase = -theta * tau * m[i].real();
    out[i] *= cplx(std::cos(phase), std::sin(phase));
  }
  return out;
}

/// Conserved energy E = (1/2)(-Delta_alpha)[psi] + (theta/4) quartic term.
inline double energy(const PointOpParams& p, const Potential& pot,
                     const Field& psi, int theta) {
  return 0.5 * quadratic_form(p, psi) + 0.25 * theta * hartree_energy(pot, psi);
}

/// One full Strang step; tau may be negative (time reversal).
inline Field strang_step(const PointOpParams& p, const Potential& pot,
                         const Field& psi, double tau, int theta) {
  Field u = nonlinear_step(pot, psi, tau / 2.0, theta);
  u = linear_step(p, u, tau);
  return nonlinear_step(pot, u, tau / 2.0, theta);
}

/// Strang loop with conservation tracking.  Aborts with the blow-up flag if
/// the energy norm exceeds 1e6 times its initial value or goes non-finite;
/// the flag is diagnostic, not an error.
inline EvolutionTrace run(const PointOpParams& p, const Potential& pot,
                          const Field& psi0, const EvolutionConfig& cfg) {
  cfg.validate();
  if (psi0.spec() != p.spec())
    throw std::invalid_argument("run: initial datum on the wrong grid");

  EvolutionTrace tr;
  Field psi = psi0;
  const double h1a0 = h1alpha_norm(p, psi);
  auto record = [&](double t) {
    const double m = l2_norm(psi);
    tr.times.push_back(t);
    tr.mass.push_back(m * m);
    tr.energy.push_back(energy(p, pot, psi, cfg.theta));
    tr.h1alpha.push_back(h1alpha_norm(p, psi));
  };
  record(0.0);

  const long nsteps = std::lround(cfg.T / cfg.dt);
  for (long k = 1; k <= nsteps; ++k) {
    psi = strang_step(p, pot, psi, cfg.dt, cfg.theta);
    const double h1a = h1alpha_norm(p, psi);
    if (!std::isfinite(h1a) || h1a > 1e6 * h1a0) {
      tr.blowup = true;
      record(k * cfg.dt);
      break;
    }
    if (k % cfg.record_every == 0 || k == nsteps) record(k * cfg.dt);
  }
  tr.final_state = std::move(psi);
  return tr;
}

// A-priori bounds on sup_t of the energy norm, from the conserved mass M and
// energy E.  h1alpha^2 = quadratic_form + (1 - e_h) M.

/// theta = +1: the quartic term is discarded, 2E + (1-e_h)M bounds h1alpha^2.
inline double defocusing_bound(double E0, double M0, double e_h) {
  const double b = 2.0 * E0 + (1.0 - e_h) * M0;
  return std::sqrt(b > 0.0 ? b : 0.0);
}

/// theta = -1, p = 1: valid below the mass threshold M < 2/C_gn.
inline double mass_critical_bound(double E0, double M0, double e_h,
                                  double C_gn) {
  const double denom = 1.0 - 0.5 * C_gn * M0;
  if (!(denom > 0.0))
    throw std::domain_error("mass_critical_bound: mass at or above threshold");
  const double b = (2.0 * E0 + (1.0 - e_h) * M0) / denom;
  return std::sqrt(b > 0.0 ? b : 0.0);
}

/// theta = -1, p > 1: largest root of x^2 = B0 + B1 x^{2/p} with
/// B0 = 2E + (1-e_h)M and B1 = (1/2) C_gn M^{2 - 1/p}.
inline double subcritical_root_bound(double E0, double M0, double e_h,
                                     double C_gn, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("subcritical_root_bound: p <= 1");
  const double B0 = std::max(2.0 * E0 + (1.0 - e_h) * M0, 0.0);
  const double B1 = 0.5 * C_gn * std::pow(M0, 2.0 - 1.0 / p);
  auto g = [&](double x) { return B0 + B1 * std::pow(x, 2.0 / p) - x * x; };
  // bracket the largest root: g > 0 at small x, g -> -inf
  double hi = std::sqrt(B0) + 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

struct ThresholdEntry {
  double amplitude = 0.0;
  double mass_norm = 0.0;  // ||psi0||_{L^2}
  double sup_h1alpha = 0.0;
  double bound = 0.0;  // mass-critical a-priori bound; 0 when above threshold
  bool below_threshold = false;
  bool blowup = false;
};

/// Focusing runs of a fixed Gaussian profile at the given amplitudes over a
/// mass-critical kernel, partitioned by the mass threshold kappa.
inline std::vector<ThresholdEntry> threshold_probe(
    const PointOpParams& p, const Potential& pot,
    const std::vector<double>& amplitudes, double kappa,
    const EvolutionConfig& base_cfg) {
  if (pot.regime() != Regime::mass_critical)
    throw std::invalid_argument("threshold_probe: kernel must be mass-critical");
  const GridSpec& spec = p.spec();
  const double e_h = p.discrete_eigenvalue();
  const double C_gn = 2.0 / (kappa * kappa);

  Field profile(spec, Space::position);
  const double w0 = spec.L / 16.0;
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) {
      const double x = spec.coord(i), y = spec.coord(j);
      profile.at(i, j) = std::exp(-(x * x + y * y) / (2.0 * w0 * w0));
    }
  profile *= 1.0 / l2_norm(profile);

  std::vector<ThresholdEntry> report;
  for (double a : amplitudes) {
    Field psi0 = profile;
    psi0 *= a;
    EvolutionConfig cfg = base_cfg;
    cfg.theta = -1;
    EvolutionTrace tr = run(p, pot, psi0, cfg);
    ThresholdEntry e;
    e.amplitude = a;
    e.mass_norm = l2_norm(psi0);
    for (double h : tr.h1alpha) e.sup_h1alpha = std::max(e.sup_h1alpha, h);
    e.below_threshold = e.mass_norm < kappa;
    e.blowup = tr.blowup;
    if (e.below_threshold)
      e.bound = mass_critical_bound(tr.energy.front(), tr.mass.front(), e_h,
                                    C_gn);
    report.push_back(e);
  }
  return report;
}

/// Local-continuity ratio: evolve psi0 and psi0 + eps*(unit direction) over a
/// short window and return sup_t |psi - psi~|_{H1alpha} over its initial
/// value.  The short-time theory gives <= 2.
inline double continuous_dependence_probe(const PointOpParams& p,
                                          const Potential& pot,
                                          const Field& psi0, double eps,
                                          double T_small, double dt = 1e-3) {
  if (!(pot.p() > 1.0))
    throw std::invalid_argument(
        "continuous_dependence_probe: kernel must be mass-subcritical");
  if (eps == 0.0) return 1.0;  // identical trajectories, by convention
  if (!(eps <= 1e-2 * h1alpha_norm(p, psi0)))
    throw std::invalid_argument(
        "continuous_dependence_probe: perturbation too large");

  const GridSpec& spec = p.spec();
  Field dir(spec, Space::position);
  const double w0 = spec.L / 12.0;
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) {
      const double x = spec.coord(i) - spec.L / 10.0, y = spec.coord(j);
      dir.at(i, j) = std::exp(-(x * x + y * y) / (2.0 * w0 * w0));
    }
  dir *= eps / h1alpha_norm(p, dir);
  Field psi_b = psi0;
  psi_b += dir;

  const double d0 = eps;
  Field a = psi0, b = psi_b;
  const long nsteps = std::lround(T_small / dt);
  double ratio = 1.0;
  for (long k = 1; k <= nsteps; ++k) {
    a = strang_step(p, pot, a, dt, -1);
    b = strang_step(p, pot, b, dt, -1);
    Field diff = a;
    diff -= b;
    ratio = std::max(ratio, h1alpha_norm(p, diff) / d0);
  }
  return ratio;
}

}  // namespace sh2d
