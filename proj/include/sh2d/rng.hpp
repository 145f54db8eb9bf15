// Deterministic random number generation for the randomized suites.
// std::mt19937_64 with hand-rolled output maps (std::*_distribution output is
// implementation-defined, which would break cross-platform byte-identical
// reports).
#pragma once

#include "sh2d/grid.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace sh2d {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return (eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (one value per call; the pair's second
  /// member is discarded to keep the stream simple and documented).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Complex Gaussian field, band-limited to |k| <= N/4 modes for smoothness.
inline Field random_field(const GridSpec& g, Rng& rng) {
  Field uh(g, Space::frequency);
  const int cut = g.N / 4;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      const int ki = i - g.N / 2, kj = j - g.N / 2;
      if (ki * ki + kj * kj <= cut * cut)
        uh.at(i, j) = cplx(rng.normal(), rng.normal()) /
                      (1.0 + ki * ki + kj * kj);
    }
  return to_position(uh);
}

/// Real random field.
inline Field random_real_field(const GridSpec& g, Rng& rng) {
  Field u = random_field(g, rng);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = u[i].real();
  return u;
}

/// Smooth non-negative random field: a positive mixture of random Gaussian
/// bumps.  Used by the rearrangement inequality trials, which assume
/// non-negative data.
inline Field random_bump_field(const GridSpec& g, Rng& rng, int bumps = 6) {
  Field u(g, Space::position);
  for (int b = 0; b < bumps; ++b) {
    const double cx = rng.uniform(-g.L / 4.0, g.L / 4.0);
    const double cy = rng.uniform(-g.L / 4.0, g.L / 4.0);
    const double w = rng.uniform(g.L / 24.0, g.L / 8.0);
    const double a = rng.uniform(0.2, 1.0);
    for (int i = 0; i < g.N; ++i)
      for (int j = 0; j < g.N; ++j) {
        const double x = g.coord(i) - cx, y = g.coord(j) - cy;
        u.at(i, j) += a * std::exp(-(x * x + y * y) / (2.0 * w * w));
      }
  }
  return u;
}

}  // namespace sh2d
