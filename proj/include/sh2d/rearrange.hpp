// Discrete Schwartz (symmetric decreasing) rearrangement on the torus grid,
// plus the Polya-Szego and Riesz/BFLL inequality monitors.  The discrete
// rearrangement preserves the value multiset exactly (hence every Lp norm);
// the gradient and convolution inequalities hold only statistically, with
// violations shrinking as the grid refines.
#pragma once

#include "sh2d/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sh2d {

/// Cell ordering by torus distance from the origin cell, ties broken
/// lexicographically by (row, col) for reproducibility.
class CellRanking {
 public:
  explicit CellRanking(const GridSpec& spec) : spec_(spec), order_(spec.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const int N = spec.N;
    std::vector<double> dist(spec.size());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double x = spec.coord(i), y = spec.coord(j);
        dist[static_cast<std::size_t>(i) * N + j] = x * x + y * y;
      }
    std::stable_sort(order_.begin(), order_.end(),
                     [&dist](std::size_t a, std::size_t b) {
                       return dist[a] < dist[b];
                     });
  }

  const GridSpec& spec() const { return spec_; }
  const std::vector<std::size_t>& order() const { return order_; }

 private:
  GridSpec spec_;
  std::vector<std::size_t> order_;
};

/// Sorted-descending values written into cells in ranking order.
inline Field symmetrize(const Field& u, const CellRanking& ranking) {
  if (u.spec() != ranking.spec() || u.space() != Space::position)
    throw std::invalid_argument("symmetrize: field/ranking mismatch");
  double maxv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    maxv = std::max(maxv, std::abs(u[i].real()));
  std::vector<double> vals(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i].imag()) > 1e-14 * std::max(maxv, 1.0))
      throw std::invalid_argument("symmetrize: field must be real");
    if (u[i].real() < -1e-14 * maxv)
      throw std::invalid_argument("symmetrize: field must be non-negative");
    vals[i] = u[i].real();
  }
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  Field out(u.spec(), Space::position);
  const auto& ord = ranking.order();
  for (std::size_t r = 0; r < ord.size(); ++r) out[ord[r]] = vals[r];
  return out;
}

/// (lhs, rhs) of the Polya-Szego inequality |grad u*| <= |grad u|.
inline std::pair<double, double> check_polya_szego(const Field& u,
                                                  const CellRanking& ranking) {
  return {h1_seminorm(symmetrize(u, ranking)), h1_seminorm(u)};
}

/// (lhs, rhs) of the Riesz/BFLL inequality for the quartic Hartree pairing
/// of v = f + g against its rearranged counterpart v* = f* + g*.  The kernel
/// w_hat must come from a radial non-increasing w (it is not rearranged).
inline std::pair<double, double> check_riesz_bfll(const Field& w_hat,
                                                  const Field& f, const Field& g,
                                                  const CellRanking& ranking) {
  auto quartic = [&w_hat](const Field& a, const Field& b) {
    Field v = a;
    v += b;
    Field sq(v.spec(), Space::position);
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i]);
    const Field conv = convolve(w_hat, sq);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += conv[i].real() * sq[i].real();
    const double h = v.spec().h();
    return h * h * s;
  };
  const Field fs = symmetrize(f, ranking);
  const Field gs = symmetrize(g, ranking);
  return {quartic(f, g), quartic(fs, gs)};
}

}  // namespace sh2d
