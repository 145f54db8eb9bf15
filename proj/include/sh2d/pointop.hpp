// The discrete point-interaction operator -Delta_alpha.
//
// The operator is defined, not discretized: the free resolvent plus the
// rank-one Green projection (the resolvent formula of the continuum operator)
// is inverted by Sherman-Morrison at a reference frequency omega_ref, and
// A := R_{omega_ref}^{-1} - omega_ref is taken as THE operator.  Everything
// else (forms, spectra, resolvents at other frequencies, the Cayley step)
// is derived from A by exact linear algebra, so resolvent identities,
// self-adjointness and unitarity hold to roundoff on the grid.
//
// In frequency space A acts as |xi|^2 minus a rank-one point term:
//   (A g)^ = |xi|^2 g^ - (g(0)/B) (2pi)^{-1},   B = beta_alpha(omega_ref) + G^h_{omega_ref}(0),
// and the induced resolvent at any admissible omega is
//   (A + omega)^{-1} g = (-Delta+omega)^{-1} g + <g, G_omega> G_omega / beta_d(omega),
// with the DISCRETE coupling beta_d(omega) = B - G^h_omega(0).  beta_d agrees
// with the continuum beta_alpha(omega) up to the frequency-lattice truncation
// (the log-divergent parts of the lattice Green values cancel in B - G^h).
#pragma once

#include "sh2d/grid.hpp"
#include "sh2d/specfun.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sh2d {

/// Lattice Green value at the origin: G^h_omega(0) = (2pi)^{-2} dxi^2 sum_k
/// (omega + |xi_k|^2)^{-1}.  Finite on the grid (the continuum value diverges
/// logarithmically; the divergence is absorbed into the coupling).
inline cplx lattice_green_origin(const GridSpec& g, cplx omega) {
  cplx s = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) s += 1.0 / (omega + g.xi2(i, j));
  const double d = g.dxi();
  return s * d * d / (4.0 * M_PI * M_PI);
}

/// Periodized discrete Green function: inverse transform of
/// (2pi)^{-1} (omega + |xi|^2)^{-1}.  Real for real omega.
inline Field green_field(const GridSpec& g, cplx omega) {
  if (omega == 0.0) throw std::domain_error("green_field: omega must be nonzero");
  Field gh(g, Space::frequency);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j)
      gh.at(i, j) = 1.0 / (2.0 * M_PI * (omega + g.xi2(i, j)));
  Field out = to_position(gh);
  if (omega.imag() == 0.0 && omega.real() > 0.0)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i].real();
  return out;
}

class PointOpParams {
 public:
  PointOpParams(const GridSpec& spec, double alpha,
                double omega_ref = 0.0)
      : spec_(spec), alpha_(alpha), e_alpha_(sh2d::e_alpha(alpha)) {
    omega_ref_ = omega_ref > 0.0 ? omega_ref : -e_alpha_ + 1.0;
    if (!(omega_ref_ > -e_alpha_))
      throw std::invalid_argument(
          "PointOpParams: omega_ref must exceed |e_alpha|");
    coupling_ = beta(alpha_, omega_ref_) +
                lattice_green_origin(spec_, omega_ref_).real();
  }

  const GridSpec& spec() const { return spec_; }
  double alpha() const { return alpha_; }
  double e_alpha() const { return e_alpha_; }
  double omega_ref() const { return omega_ref_; }

  /// B = beta_alpha(omega_ref) + G^h_{omega_ref}(0): the Sherman-Morrison
  /// denominator of the point term.
  double coupling() const { return coupling_; }

  /// Discrete coupling scalar at frequency omega.  Vanishes exactly at the
  /// discrete eigenvalue, beta_d(|e_h|) = 0.
  cplx beta_d(cplx omega) const { return coupling_ - green_origin(omega); }

  /// Cached lattice Green origin value G^h_omega(0).
  cplx green_origin(cplx omega) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = g0_.find(key(omega));
    if (it != g0_.end()) return it->second;
    const cplx v = lattice_green_origin(spec_, omega);
    g0_.emplace(key(omega), v);
    return v;
  }

  /// Cached position-space Green field.
  const Field& green(cplx omega) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = gf_.find(key(omega));
    if (it != gf_.end()) return *it->second;
    auto f = std::make_shared<Field>(green_field(spec_, omega));
    return *gf_.emplace(key(omega), std::move(f)).first->second;
  }

  /// Discrete eigenvalue e_h < 0: the unique zero of beta_d on (-omega_ref, 0),
  /// located by bisection on the lattice sum.
  double discrete_eigenvalue() const {
    std::lock_guard<std::mutex> lock(mu_);
    if (!(e_h_ < 0.0)) {
      double lo = 1e-14, hi = omega_ref_;  // bracket for |e_h|
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double b = coupling_ - lattice_green_origin(spec_, mid).real();
        (b > 0.0 ? hi : lo) = mid;
        if (hi - lo < 1e-15 * hi) break;
      }
      e_h_ = -0.5 * (lo + hi);
    }
    return e_h_;
  }

 private:
  static std::pair<double, double> key(cplx w) { return {w.real(), w.imag()}; }

  GridSpec spec_;
  double alpha_;
  double e_alpha_;
  double omega_ref_;
  double coupling_;
  mutable double e_h_ = 1.0;  // unset marker
  mutable std::map<std::pair<double, double>, cplx> g0_;
  mutable std::map<std::pair<double, double>, std::shared_ptr<Field>> gf_;
  mutable std::mutex mu_;
};

/// Decomposed energy-space element v = f + c G_lambda.
struct EnergyElement {
  Field f;          // regular part, position space
  cplx c = 0.0;     // singular coefficient
  double lambda = 2.0;  // anchor frequency, > |e_alpha|
};

inline void check_anchor(const PointOpParams& p, double lambda) {
  if (!(lambda > -p.e_alpha()))
    throw std::invalid_argument("EnergyElement: lambda must exceed |e_alpha|");
}

inline Field assemble(const PointOpParams& p, const EnergyElement& e) {
  check_anchor(p, e.lambda);
  if (e.f.spec() != p.spec())
    throw std::invalid_argument("assemble: grid spec mismatch");
  Field v = e.f;
  const Field& g = p.green(e.lambda);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += e.c * g[i];
  return v;
}

/// (A + omega)^{-1} g.  Real omega uses the conjugated pairing, complex omega
/// the bilinear one (analytic continuation; both coincide on real fields).
inline Field resolvent_apply(const PointOpParams& p, const Field& g, cplx omega) {
  if (g.space() != Space::position)
    throw std::invalid_argument("resolvent_apply: field must be in position space");
  const bool real_omega = omega.imag() == 0.0;
  if (real_omega && !(omega.real() > 0.0))
    throw std::domain_error("resolvent_apply: real omega must be positive");
  const cplx bd = p.beta_d(omega);
  if (real_omega && std::abs(bd) < 1e-13)
    throw std::domain_error("resolvent_apply: omega at the resolvent pole");

  const GridSpec& spec = p.spec();
  Field gh = to_frequency(g);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) gh.at(i, j) /= omega + spec.xi2(i, j);
  Field out = to_position(gh);

  const Field& gw = p.green(omega);
  const cplx pairing = real_omega ? inner(g, gw) : pair_bilinear(g, gw);
  const cplx coeff = pairing / bd;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * gw[i];
  return out;
}

/// A g = R_{omega_ref}^{-1} g - omega_ref g via Sherman-Morrison: in
/// frequency space the inverse is |xi|^2 minus a rank-one point term.
inline Field operator_apply(const PointOpParams& p, const Field& g) {
  if (g.space() != Space::position)
    throw std::invalid_argument("operator_apply: field must be in position space");
  if (std::abs(p.coupling()) < 1e-13)
    throw std::domain_error("operator_apply: singular Sherman-Morrison correction");
  const GridSpec& spec = p.spec();
  const cplx point = g[spec.origin_index()] / p.coupling() / (2.0 * M_PI);
  Field gh = to_frequency(g);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) gh.at(i, j) = spec.xi2(i, j) * gh.at(i, j) - point;
  return to_position(gh);
}

/// (-Delta_alpha)[g] = Re<A g, g> = |grad g|^2 - |g(0)|^2 / B.
inline double quadratic_form(const PointOpParams& p, const Field& g) {
  if (g.space() != Space::position)
    throw std::invalid_argument("quadratic_form: field must be in position space");
  if (std::abs(p.coupling()) < 1e-13)
    throw std::domain_error("quadratic_form: singular Sherman-Morrison correction");
  const double grad2 = h1_seminorm(g);
  const double g0 = std::norm(g[p.spec().origin_index()]);
  return grad2 * grad2 - g0 / p.coupling();
}

/// Birman route to (-Delta_alpha)[v] + lambda |v|^2 for v = f + c G_lambda,
/// from (f, c) scalars and f-norms alone (no operator application):
///   |grad f|^2 + lambda |f|^2 + 2 Re(conj(c) f(0)) + |c|^2 G^h(0)
///     - |f(0) + c G^h(0)|^2 / B.
/// For band-limited f this is the discrete form of the continuum Birman
/// formula; the |c|^2 coefficient tends to beta_alpha(lambda) as the
/// frequency lattice grows.
inline double birman_form(const PointOpParams& p, const EnergyElement& e) {
  check_anchor(p, e.lambda);
  const double grad = h1_seminorm(e.f);
  const double l2 = l2_norm(e.f);
  const cplx f0 = e.f[p.spec().origin_index()];
  const double g0 = p.green_origin(e.lambda).real();
  const cplx v0 = f0 + e.c * g0;
  return grad * grad + e.lambda * l2 * l2 + 2.0 * std::real(std::conj(e.c) * f0) +
         std::norm(e.c) * g0 - std::norm(v0) / p.coupling();
}

/// Energy norm, positive definite on the grid by using the discrete
/// eigenvalue e_h in place of the continuum e_alpha.
inline double h1alpha_norm(const PointOpParams& p, const Field& g) {
  const double q = quadratic_form(p, g);
  const double l2 = l2_norm(g);
  const double val = q + (1.0 - p.discrete_eigenvalue()) * l2 * l2;
  return std::sqrt(val > 0.0 ? val : 0.0);
}

struct BoundState {
  double e_h;
  Field phi;  // unit L2 norm
};

/// Power iteration on the resolvent at omega_ref; the dominant eigenvalue
/// mu = 1/(omega_ref + e_h) belongs to the point-term bound state.
inline BoundState bound_state(const PointOpParams& p, int max_iter = 10000) {
  const GridSpec& spec = p.spec();
  Field u = p.green(p.omega_ref());  // overlaps the bound state
  u *= 1.0 / l2_norm(u);
  double mu_prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Field ru = resolvent_apply(p, u, p.omega_ref());
    const double mu = std::real(inner(ru, u));
    ru *= 1.0 / l2_norm(ru);
    u = std::move(ru);
    if (it > 0 && std::abs(mu - mu_prev) < 1e-12) {
      // fix the global sign: the bound state is positive
      if (u[spec.origin_index()].real() < 0.0) u *= -1.0;
      return {1.0 / mu - p.omega_ref(), std::move(u)};
    }
    mu_prev = mu;
  }
  throw std::runtime_error("bound_state: power iteration did not converge");
}

}  // namespace sh2d
