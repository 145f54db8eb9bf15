// Ground states of the singular Hartree equation: Weinstein-quotient
// minimization over decomposed energy elements v = f + c G_lambda, the
// Euler-Lagrange residual, standing-wave rescaling, and estimation of the
// Gagliardo-Nirenberg optimal constant with its mass-critical threshold.
#pragma once

#include "sh2d/pointop.hpp"
#include "sh2d/potential.hpp"
#include "sh2d/rearrange.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sh2d {

/// (A + lambda) v in one transform round trip.
inline Field apply_shifted(const PointOpParams& p, const Field& v, double lambda) {
  const GridSpec& spec = p.spec();
  const cplx point = v[spec.origin_index()] / p.coupling() / (2.0 * M_PI);
  Field vh = to_frequency(v);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j)
      vh.at(i, j) = (spec.xi2(i, j) + lambda) * vh.at(i, j) - point;
  return to_position(vh);
}

/// Sobolev-preconditioned copy: r^ / (lambda + |xi|^2).
inline Field precondition(const Field& r, double lambda) {
  const GridSpec& spec = r.spec();
  Field rh = to_frequency(r);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) rh.at(i, j) /= lambda + spec.xi2(i, j);
  return to_position(rh);
}

inline double weinstein_numerator(const PointOpParams& p, const EnergyElement& e) {
  return birman_form(p, e);
}

/// W(v) = ((-Delta_alpha)[v] + lambda |v|^2) / sqrt(quartic Hartree energy).
inline double weinstein(const PointOpParams& p, const EnergyElement& e,
                        const Potential& pot) {
  const double hart = hartree_energy(pot, assemble(p, e));
  if (hart < 1e-28) throw std::domain_error("weinstein: vanishing Hartree energy");
  return weinstein_numerator(p, e) / std::sqrt(hart);
}

/// Lambda(v), homogeneous of degree -2; the Euler-Lagrange multiplier.
inline double lambda_ratio(const PointOpParams& p, const EnergyElement& e,
                           const Potential& pot) {
  const double hart = hartree_energy(pot, assemble(p, e));
  if (hart < 1e-28)
    throw std::domain_error("lambda_ratio: vanishing Hartree energy");
  return weinstein_numerator(p, e) / hart;
}

struct Gradient {
  Field df;
  double dc;
};

/// Frechet gradient (up to the positive factor 1/sqrt(H)) of the Weinstein
/// quotient at unit quartic energy, in (f, c) coordinates:
///   field part 2 [ (A+lambda) v - Lambda (w*|v|^2) v ],
///   c part its pairing against G_lambda.
/// Vanishes exactly at Euler-Lagrange points (A+lambda)v = Lambda ht;
/// finite-difference consistent against W along quartic-preserving
/// directions.
inline Gradient gradient(const PointOpParams& p, const EnergyElement& e,
                         const Potential& pot) {
  const Field v = assemble(p, e);
  const Field av = apply_shifted(p, v, e.lambda);
  const Field ht = hartree_term(pot, v);
  const double hart = hartree_energy(pot, v);
  if (hart < 1e-28) throw std::domain_error("gradient: vanishing Hartree energy");
  const double lam = std::real(inner(av, v)) / hart;
  Field r = av;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = 2.0 * (av[i] - lam * ht[i]);
  const double dc = std::real(inner(r, p.green(e.lambda)));
  return {std::move(r), dc};
}

/// Fixed-point residual |v - Lambda(v) R_lambda[(w*|v|^2)v]| / |v| in the
/// energy norm.
inline double el_residual(const PointOpParams& p, const EnergyElement& e,
                          const Potential& pot) {
  const Field v = assemble(p, e);
  const Field ht = hartree_term(pot, v);
  const double hart = hartree_energy(pot, v);
  if (hart < 1e-28)
    throw std::domain_error("el_residual: vanishing Hartree energy");
  const double lam = weinstein_numerator(p, e) / hart;
  Field rhs = resolvent_apply(p, ht, e.lambda);
  rhs *= lam;
  Field diff = v;
  diff -= rhs;
  return h1alpha_norm(p, diff) / h1alpha_norm(p, v);
}

struct SolveConfig {
  double lambda = 2.0;
  double tol = 1e-6;
  int max_iter = 20000;
  int symmetrize_every = 10;
};

struct SolveReport {
  double W_value = 0.0;
  double Lambda = 0.0;
  int iterations = 0;
  double el_residual = 0.0;
  double c = 0.0;
  double f_origin = 0.0;
  double canonical_gap = 0.0;
  bool monotone_radial = false;
  bool converged = false;
  int symmetrize_increase_events = 0;
  std::vector<double> w_history;
};

/// Relative gap |c beta_alpha(lambda) - f(0)| of the canonical H^2_alpha
/// representation; small at convergence, up to the lattice-truncation offset
/// between the discrete and continuum couplings.
inline double canonical_check(const PointOpParams& p, const EnergyElement& e) {
  const double b = beta(p.alpha(), e.lambda);
  const cplx f0 = e.f[p.spec().origin_index()];
  const double num = std::abs(e.c * b - f0);
  const double den = std::abs(e.c * b) + std::abs(f0);
  return den > 0.0 ? num / den : 0.0;
}

/// Re-express v = f + c G_lambda with the canonical split induced by the
/// Euler-Lagrange fixed point v = Lambda R_lambda[ht]: the resolvent's
/// rank-one coefficient defines c, the free part defines f.  Leaves
/// assemble(e) unchanged up to roundoff; at a converged minimizer it makes
/// c beta(lambda) = f(0) hold to the discrete-coupling tail error.
inline EnergyElement canonical_resplit(const PointOpParams& p,
                                       const Potential& pot,
                                       const EnergyElement& e) {
  const Field v = assemble(p, e);
  const Field ht = hartree_term(pot, v);
  const double hart = hartree_energy(pot, v);
  if (hart < 1e-28)
    throw std::domain_error("canonical_resplit: vanishing Hartree energy");
  const double lam = weinstein_numerator(p, e) / hart;
  const double bd = p.beta_d(e.lambda).real();
  const double c = lam * std::real(inner(ht, p.green(e.lambda))) / bd;
  EnergyElement out{v, c, e.lambda};
  const Field& g = p.green(e.lambda);
  for (std::size_t i = 0; i < out.f.size(); ++i) out.f[i] -= c * g[i];
  return out;
}

inline bool radially_monotone(const Field& u, const CellRanking& ranking,
                              double rel_tol = 1e-8) {
  double maxv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    maxv = std::max(maxv, std::abs(u[i].real()));
  const auto& ord = ranking.order();
  for (std::size_t r = 0; r + 1 < ord.size(); ++r)
    if (u[ord[r + 1]].real() > u[ord[r]].real() + rel_tol * maxv) return false;
  return true;
}

namespace detail {

inline void rescale_unit_quartic(const PointOpParams& p, const Potential& pot,
                                 EnergyElement& e) {
  const double hart = hartree_energy(pot, assemble(p, e));
  if (hart < 1e-28) throw std::domain_error("minimize: degenerate iterate");
  const double s = std::pow(hart, -0.25);
  e.f *= s;
  e.c *= s;
}

}  // namespace detail

/// Preconditioned projected descent on the Weinstein quotient with periodic
/// Schwartz symmetrization of the regular part.  The quartic energy is
/// rescaled to 1 after every accepted step; c is kept in [0, inf).
inline std::pair<EnergyElement, SolveReport> minimize(
    const PointOpParams& p, const Potential& pot, const SolveConfig& cfg,
    const EnergyElement* init = nullptr) {
  check_anchor(p, cfg.lambda);
  const GridSpec& spec = p.spec();
  const CellRanking ranking(spec);
  const Field& green = p.green(cfg.lambda);
  const double beta_d = p.beta_d(cfg.lambda).real();

  // default initial guess: broad Gaussian plus a small singular component
  EnergyElement e{Field(spec, Space::position), 0.1, cfg.lambda};
  if (init) {
    e = *init;
    e.lambda = cfg.lambda;
  } else {
    const double w0 = spec.L / 8.0;
    for (int i = 0; i < spec.N; ++i)
      for (int j = 0; j < spec.N; ++j) {
        const double x = spec.coord(i), y = spec.coord(j);
        e.f.at(i, j) = std::exp(-(x * x + y * y) / (2.0 * w0 * w0));
      }
  }
  detail::rescale_unit_quartic(p, pot, e);

  SolveReport rep;
  const double cpre = 1.0 / (2.0 * std::max(beta_d, 1e-3));
  double step = 1.0;

  auto w_of = [&](const EnergyElement& el) { return weinstein(p, el, pot); };
  double w_cur = w_of(e);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    rep.iterations = it;

    const Field v = assemble(p, e);
    const Field av = apply_shifted(p, v, cfg.lambda);
    const Field m = hartree_multiplier(pot, v);
    double hart = 0.0;
    {
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += m[i].real() * std::norm(v[i]);
      hart = spec.h() * spec.h() * s;
    }
    const double num = std::real(inner(av, v));
    const double lam = num / hart;

    Field r(spec, Space::position);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = 2.0 * (av[i] - lam * m[i].real() * v[i]);
    const double dc = std::real(inner(r, green));

    Field dir = precondition(r, cfg.lambda);
    dir *= -1.0;
    const double dirc = -cpre * dc;

    // directional derivative of W
    const double slope =
        (std::real(inner(r, dir)) + dc * dirc) / std::sqrt(hart);

    double s = std::min(2.0 * step, 1.0);
    bool accepted = false;
    EnergyElement trial = e;
    for (int ls = 0; ls < 40; ++ls) {
      trial.f = e.f;
      trial.f += s * cplx(1.0) * dir;
      trial.c = std::max(std::real(e.c) + s * dirc, 0.0);
      const double w_try = w_of(trial);
      if (w_try <= w_cur + 1e-4 * s * slope) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (accepted) {
      e = trial;
      w_cur = w_of(e);
      step = s;
      detail::rescale_unit_quartic(p, pot, e);
    }
    rep.w_history.push_back(w_cur);

    if (it % cfg.symmetrize_every == 0) {
      EnergyElement sym = e;
      for (std::size_t i = 0; i < sym.f.size(); ++i)
        sym.f[i] = std::abs(sym.f[i]);
      sym.f = symmetrize(sym.f, ranking);
      sym.c = std::abs(e.c);
      const double w_sym = w_of(sym);
      if (w_sym <= w_cur) {
        e = sym;
        w_cur = w_sym;
      } else {
        ++rep.symmetrize_increase_events;
        if (w_sym <= w_cur * (1.0 + 1e-3)) {
          // within the statistical tolerance; keep the better iterate (e)
        }
      }
    }

    if (it % 5 == 0 || !accepted) {
      rep.el_residual = el_residual(p, e, pot);
      if (rep.el_residual < cfg.tol) {
        rep.converged = true;
        break;
      }
      if (!accepted && s < 1e-14) break;  // stalled
    }
  }

  // final symmetrized, non-negative profile
  {
    EnergyElement sym = e;
    for (std::size_t i = 0; i < sym.f.size(); ++i) sym.f[i] = std::abs(sym.f[i]);
    sym.f = symmetrize(sym.f, ranking);
    sym.c = std::abs(e.c);
    if (w_of(sym) <= w_cur * (1.0 + 1e-9)) e = sym;
  }
  // the optimizer's (f, c) split is one of many grid representations of the
  // same v; report against the canonical one
  e = canonical_resplit(p, pot, e);
  rep.el_residual = el_residual(p, e, pot);
  rep.converged = rep.el_residual < cfg.tol;
  rep.W_value = w_of(e);
  rep.Lambda = lambda_ratio(p, e, pot);
  rep.c = std::real(e.c);
  rep.f_origin = std::real(e.f[spec.origin_index()]);
  rep.canonical_gap = canonical_check(p, e);
  // allowance for the Nyquist-truncation ringing the Green field imprints on
  // the canonical f (measured 1.3e-4 of peak at N=128, shrinking ~4x per
  // grid doubling)
  rep.monotone_radial = radially_monotone(e.f, ranking, 2e-4);
  return {std::move(e), rep};
}

/// Q = sqrt(Lambda(v)) v; Lambda(Q) = 1, so e^{i lambda t} Q is a standing
/// wave of the focusing flow (with the e^{-i tau A} propagator convention).
inline EnergyElement rescale_to_standing_wave(const PointOpParams& p,
                                              const EnergyElement& e,
                                              const Potential& pot) {
  const double lam = lambda_ratio(p, e, pot);
  EnergyElement q = e;
  const double s = std::sqrt(lam);
  q.f *= s;
  q.c *= s;
  return q;
}

struct GNReport {
  double C_gn = 0.0;
  double kappa = 0.0;   // sqrt(2 / C_gn)
  int iterations = 0;
  EnergyElement maximizer;
};

/// Ratio of the Gagliardo-Nirenberg inequality for a grid state.
inline double gn_ratio(const PointOpParams& p, const Potential& pot,
                       const Field& psi) {
  const double hart = hartree_energy(pot, psi);
  if (hart < 1e-28) return 0.0;
  const double pp = pot.p();
  return hart / (std::pow(h1alpha_norm(p, psi), 2.0 / pp) *
                 std::pow(l2_norm(psi), 4.0 - 2.0 / pp));
}

/// Estimate the optimal constant by preconditioned ascent with periodic
/// symmetrization; the objective is scale-invariant by the exponent choice.
inline GNReport gn_constant_estimate(const PointOpParams& p, const Potential& pot,
                                     int max_iter = 4000, double tol = 1e-10) {
  const GridSpec& spec = p.spec();
  const CellRanking ranking(spec);
  const double eh = p.discrete_eigenvalue();
  const double pp = pot.p();

  Field psi = bound_state(p).phi;  // radial, overlaps the maximizer
  double best = gn_ratio(p, pot, psi);
  double step = 1.0;
  int it = 1;
  for (; it <= max_iter; ++it) {
    const Field av = apply_shifted(p, psi, 1.0 - eh);  // (A + 1 - e_h) psi
    const Field ht = hartree_term(pot, psi);
    const double hart = hartree_energy(pot, psi);
    const double n1 = std::real(inner(av, psi));  // h1alpha^2
    const double m2 = l2_norm(psi);
    const double m = m2 * m2;

    // gradient of log(ratio)
    Field g(spec, Space::position);
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = 4.0 * ht[i] / hart - (2.0 / pp) * av[i] / n1 -
             (2.0 * (2.0 - 1.0 / pp) / m) * psi[i];
    Field dir = precondition(g, 1.0 - eh);

    const double cur = gn_ratio(p, pot, psi);
    double s = std::min(2.0 * step, 1.0);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Field trial = psi;
      trial += s * cplx(1.0) * dir;
      const double r = gn_ratio(p, pot, trial);
      if (r > cur) {
        psi = std::move(trial);
        accepted = true;
        step = s;
        break;
      }
      s *= 0.5;
    }
    if (it % 10 == 0) {
      Field sym = psi;
      for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = std::abs(sym[i]);
      sym = symmetrize(sym, ranking);
      if (gn_ratio(p, pot, sym) >= gn_ratio(p, pot, psi)) psi = std::move(sym);
    }
    const double now = gn_ratio(p, pot, psi);
    if (accepted && now - cur <= tol * now && it > 20) break;
    if (!accepted && s < 1e-14) break;
    best = std::max(best, now);
    // keep the scale tame
    psi *= 1.0 / l2_norm(psi);
  }

  GNReport rep;
  rep.C_gn = std::max(best, gn_ratio(p, pot, psi));
  rep.kappa = std::sqrt(2.0 / rep.C_gn);
  rep.iterations = it;
  rep.maximizer = EnergyElement{psi, 0.0, p.omega_ref()};
  return rep;
}

}  // namespace sh2d
