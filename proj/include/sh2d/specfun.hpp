// Scalar special functions: modified Bessel K0, the 2D Green function
// G_omega(r) = K0(r sqrt(omega))/2pi, the coupling scalar beta_alpha, and the
// point-interaction eigenvalue e_alpha = -4 exp(-2(2 pi alpha + gamma)).
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace sh2d {

inline constexpr double euler_gamma = 0.5772156649015328606;

namespace detail {

// Power series for x <= 2:
//   K0(x) = -(ln(x/2)+gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k.
// Both pieces are positive for x < 2, so there is no cancellation.
inline double k0_series(double x) {
  const double t = 0.25 * x * x;
  double i0 = 1.0, term = 1.0, s = 0.0, hk = 0.0;
  for (int k = 1; k < 64; ++k) {
    term *= t / (static_cast<double>(k) * k);
    i0 += term;
    hk += 1.0 / k;
    s += term * hk;
    if (term * hk < 1e-18 * (i0 + s)) break;
  }
  return -(std::log(0.5 * x) + euler_gamma) * i0 + s;
}

// Trapezoidal rule on K0(x) = int_0^inf exp(-x cosh t) dt.  The integrand is
// even, analytic, and decays double-exponentially, so the trapezoid converges
// geometrically; the step is refined until the value is stationary.
inline double k0_trapezoid(double x, double h) {
  double s = 0.5 * std::exp(-x);
  for (double t = h;; t += h) {
    const double e = x * std::cosh(t);
    if (e > 745.0) break;
    s += std::exp(-e);
  }
  return s * h;
}

inline double k0_quadrature(double x) {
  double h = 0.5 / std::sqrt(x < 1.0 ? 1.0 : x);
  double prev = k0_trapezoid(x, h);
  for (int i = 0; i < 8; ++i) {
    h *= 0.5;
    const double cur = k0_trapezoid(x, h);
    if (std::abs(cur - prev) <= 1e-15 * cur) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace detail

/// Modified Bessel function K0, relative error ~1e-13 on [1e-8, 700].
/// Returns 0 once the true value underflows (x beyond ~746).
inline double bessel_k0(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("bessel_k0: argument must be positive and finite");
  if (x <= 2.0) return detail::k0_series(x);
  if (x > 746.0) return 0.0;
  return detail::k0_quadrature(x);
}

/// G_omega(r) = K0(r sqrt(omega)) / 2pi, the free Green function of
/// (-Delta + omega) in two dimensions.
inline double green_value(double omega, double r) {
  if (!(omega > 0.0) || !(r > 0.0))
    throw std::domain_error("green_value: omega and r must be positive");
  return bessel_k0(r * std::sqrt(omega)) / (2.0 * M_PI);
}

/// beta_alpha(omega) = alpha + gamma/2pi + ln(sqrt(omega)/2)/2pi with
/// principal branches, so Re sqrt(omega) > 0 off the negative real axis.
inline std::complex<double> beta(double alpha, std::complex<double> omega) {
  if (omega == 0.0) throw std::domain_error("beta: omega must be nonzero");
  const std::complex<double> s = std::sqrt(omega);
  return alpha + euler_gamma / (2.0 * M_PI) + std::log(0.5 * s) / (2.0 * M_PI);
}

inline double beta(double alpha, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("beta: omega must be positive");
  return alpha + (euler_gamma + std::log(0.5 * std::sqrt(omega))) / (2.0 * M_PI);
}

/// The single negative eigenvalue of -Delta_alpha; the unique zero of
/// beta_alpha on (0, inf) sits at |e_alpha|.
inline double e_alpha(double alpha) {
  if (!std::isfinite(alpha)) throw std::domain_error("e_alpha: alpha not finite");
  return -4.0 * std::exp(-2.0 * (2.0 * M_PI * alpha + euler_gamma));
}

}  // namespace sh2d
