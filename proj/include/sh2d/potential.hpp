// Convolution kernels w for the Hartree nonlinearity.  Kernels are sampled
// in real space on the torus metric (single image), which preserves the
// non-negative / radial / non-increasing hypotheses exactly on the grid; the
// declared integrability exponents (p1, p2) are configuration, governing only
// the Gagliardo-Nirenberg exponents and the regime classification.
#pragma once

#include "sh2d/grid.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sh2d {

enum class Regime { mass_subcritical, mass_critical };

struct Potential {
  std::string kind;
  Field w;      // real-space samples, position space
  Field w_hat;  // transform, frequency space
  double p1 = 2.0, p2 = 2.0;

  double p() const { return std::min(p1, p2); }
  Regime regime() const {
    return p() == 1.0 ? Regime::mass_critical : Regime::mass_subcritical;
  }
};

namespace detail {

inline double torus_radius(const GridSpec& g, int i, int j) {
  const double x = g.coord(i), y = g.coord(j);
  return std::sqrt(x * x + y * y);
}

inline Potential sample_radial(const std::string& kind, const GridSpec& g,
                               const std::function<double(double)>& profile,
                               double p1, double p2) {
  if (!(p1 >= 1.0) || !(p2 >= 1.0))
    throw std::invalid_argument("Potential: integrability exponents must be >= 1");
  Field w(g, Space::position);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      const double v = profile(torus_radius(g, i, j));
      if (!(v >= 0.0))
        throw std::invalid_argument("Potential: kernel samples must be >= 0");
      w.at(i, j) = v;
    }
  // monotonicity along increasing radius, checked on the radial profile
  double rmax = std::sqrt(2.0) * g.L / 2.0;
  for (double r = g.h() / 2.0; r <= rmax; r += g.h() / 2.0) {
    const double v = profile(r);
    if (v > prev * (1.0 + 1e-12))
      throw std::invalid_argument("Potential: kernel must be radially non-increasing");
    prev = v;
  }
  Potential pot{kind, w, to_frequency(w), p1, p2};
  return pot;
}

}  // namespace detail

/// Pure-power kernel |x|^{-eta}, origin cell regularized to (h/2)^{-eta}.
inline Potential make_riesz(double eta, const GridSpec& g, double p1 = 0.0,
                            double p2 = 0.0) {
  if (!(eta > 0.0 && eta < 2.0))
    throw std::invalid_argument("make_riesz: eta must lie in (0, 2)");
  // default declaration: a valid sub-critical exponent p < 2/eta
  const double pd = std::max(1.0, std::min(1.5 / eta, 0.95 * 2.0 / eta));
  if (p1 <= 0.0) p1 = pd;
  if (p2 <= 0.0) p2 = pd;
  const double h = g.h();
  return detail::sample_radial(
      "riesz", g,
      [eta, h](double r) { return std::pow(r > 0.0 ? r : h / 2.0, -eta); }, p1,
      p2);
}

inline Potential make_gaussian(double sigma, const GridSpec& g, double p1 = 2.0,
                               double p2 = 2.0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_gaussian: sigma <= 0");
  return detail::sample_radial(
      "gaussian", g,
      [sigma](double r) { return std::exp(-r * r / (2.0 * sigma * sigma)); },
      p1, p2);
}

/// Indicator of the disc of the given radius.
inline Potential make_bump(double radius, const GridSpec& g, double p1 = 1.0,
                           double p2 = 1.0) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_bump: radius <= 0");
  return detail::sample_radial(
      "bump", g, [radius](double r) { return r <= radius ? 1.0 : 0.0; }, p1, p2);
}

/// Radial table at radii k*h, linearly interpolated; samples must be
/// non-negative and non-increasing.
inline Potential make_table(const std::vector<double>& samples,
                            const GridSpec& g, double p1 = 2.0,
                            double p2 = 2.0) {
  if (samples.empty()) throw std::invalid_argument("make_table: empty table");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(samples[k] >= 0.0))
      throw std::invalid_argument("make_table: samples must be >= 0");
    if (k > 0 && samples[k] > samples[k - 1] * (1.0 + 1e-12))
      throw std::invalid_argument("make_table: samples must be non-increasing");
  }
  const double h = g.h();
  auto profile = [&samples, h](double r) {
    const double t = r / h;
    const std::size_t k = static_cast<std::size_t>(t);
    if (k + 1 >= samples.size()) return samples.back();
    const double w = t - k;
    return (1.0 - w) * samples[k] + w * samples[k + 1];
  };
  return detail::sample_radial("table", g, profile, p1, p2);
}

/// The real multiplier field w * |psi|^2.
inline Field hartree_multiplier(const Potential& pot, const Field& psi) {
  if (pot.w_hat.spec() != psi.spec())
    throw std::invalid_argument("hartree: grid spec mismatch");
  Field sq(psi.spec(), Space::position);
  for (std::size_t i = 0; i < psi.size(); ++i) sq[i] = std::norm(psi[i]);
  Field m = convolve(pot.w_hat, sq);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i].real();
  return m;
}

/// (w * |psi|^2) psi.
inline Field hartree_term(const Potential& pot, const Field& psi) {
  Field m = hartree_multiplier(pot, psi);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i].real() * psi[i];
  return m;
}

/// Quartic energy h^2 sum (w * |psi|^2) |psi|^2 >= 0.
inline double hartree_energy(const Potential& pot, const Field& psi) {
  const Field m = hartree_multiplier(pot, psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    s += m[i].real() * std::norm(psi[i]);
  const double h = psi.spec().h();
  return h * h * s;
}

}  // namespace sh2d
