#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sh2d/potential.hpp>
#include <sh2d/rearrange.hpp>
#include <sh2d/rng.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace sh2d;

TEST_CASE("riesz kernel samples and declaration") {
  GridSpec g(20.0, 64);
  Potential w = make_riesz(1.0, g);
  const int c = g.N / 2;
  CHECK(w.w.at(c + 1, c).real() == doctest::Approx(1.0 / g.h()).epsilon(1e-14));
  CHECK(w.w.at(c, c).real() ==
        doctest::Approx(std::pow(g.h() / 2.0, -1.0)).epsilon(1e-14));
  CHECK(w.p() < 2.0);  // declared sub-critical for eta = 1
  CHECK(w.regime() == Regime::mass_subcritical);
  CHECK_THROWS_AS(make_riesz(2.5, g), std::invalid_argument);
  // samples non-increasing along the cell ranking
  CellRanking r(g);
  double prev = 1e300;
  for (std::size_t idx : r.order()) {
    CHECK(w.w[idx].real() <= prev + 1e-12);
    prev = w.w[idx].real();
  }
}

TEST_CASE("riesz transform matches the analytic power law at mid frequencies") {
  GridSpec g(40.0, 512);
  const double eta = 1.0;
  Potential w = make_riesz(eta, g);
  const double C = oracle::riesz_constant(eta);
  const int c = g.N / 2;
  // mid frequencies: far from both the infrared and Nyquist ends
  for (int k = 8; k <= 64; k *= 2) {
    const double xi = g.freq(c + k);
    const double ref = C * std::pow(xi, eta - 2.0);
    CHECK(w.w_hat.at(c + k, c).real() == doctest::Approx(ref).epsilon(0.05));
  }
}

TEST_CASE("gaussian, bump and table constructors") {
  GridSpec g(20.0, 64);
  Potential wg = make_gaussian(1.0, g);
  double mass = 0.0;
  for (std::size_t i = 0; i < wg.w.size(); ++i) mass += wg.w[i].real();
  CHECK(wg.w_hat[g.origin_index()].real() ==
        doctest::Approx(g.h() * g.h() * mass / (2.0 * M_PI)).epsilon(1e-12));
  CHECK(wg.w_hat[g.origin_index()].real() > 0.0);

  Potential wb = make_bump(2.0, g, 1.0, 1.0);
  CHECK(wb.regime() == Regime::mass_critical);
  const int c = g.N / 2;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      const double x = g.coord(i), y = g.coord(j);
      const double expect = (x * x + y * y <= 4.0 + 1e-12) ? 1.0 : 0.0;
      CHECK(wb.w.at(i, j).real() == expect);
    }
  CHECK(wb.w.at(c, c).real() == 1.0);

  // table of gaussian samples reproduces make_gaussian
  std::vector<double> samples;
  for (int k = 0; k * g.h() <= g.L; ++k)
    samples.push_back(std::exp(-k * g.h() * k * g.h() / 2.0));
  Potential wt = make_table(samples, g);
  // on-axis cells sit at radii k*h, where the table lookup is exact
  for (int k = 0; k < g.N / 2; ++k)
    CHECK(wt.w.at(c, c + k).real() ==
          doctest::Approx(wg.w.at(c, c + k).real()).epsilon(1e-12));
  // off-axis cells are linearly interpolated; agreement is O(h^2)
  Field diff = wt.w;
  diff -= wg.w;
  CHECK(l2_norm(diff) < 0.05);

  CHECK_THROWS_AS(make_gaussian(-1.0, g), std::invalid_argument);
  CHECK_THROWS_AS(make_table({1.0, 2.0}, g), std::invalid_argument);
  CHECK_THROWS_AS(make_table({1.0, -0.1}, g), std::invalid_argument);
}

TEST_CASE("hartree_term basics") {
  GridSpec g(20.0, 32);
  Rng rng(211);
  Field psi = random_field(g, rng);
  // delta kernel: w_hat = 1/(2pi) constant, so w*|psi|^2 = |psi|^2
  Potential delta;
  delta.kind = "delta";
  delta.w_hat = Field(g, Space::frequency);
  for (std::size_t i = 0; i < delta.w_hat.size(); ++i)
    delta.w_hat[i] = 1.0 / (2.0 * M_PI);
  delta.w = to_position(delta.w_hat);
  Field ht = hartree_term(delta, psi);
  for (std::size_t i = 0; i < psi.size(); ++i)
    CHECK(std::abs(ht[i] - std::norm(psi[i]) * psi[i]) < 1e-12);

  // zero input, gauge covariance
  Potential wg = make_gaussian(1.0, g);
  Field zero(g, Space::position);
  CHECK(l2_norm(hartree_term(wg, zero)) == 0.0);
  const cplx phase = std::polar(1.0, 0.7);
  Field rot = psi;
  rot *= phase;
  Field a = hartree_term(wg, rot);
  Field b = hartree_term(wg, psi);
  b *= phase;
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    err = std::max(err, std::abs(a[i] - b[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("hartree_energy") {
  GridSpec g(8.0, 8);
  Rng rng(223);
  Field psi(g, Space::position);
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = cplx(rng.normal(), rng.normal());
  Potential w = make_gaussian(1.2, g);
  // brute-force double sum oracle
  Field sq(g, Space::position);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(psi[i]);
  Field conv = oracle::convolve_direct(w.w, sq);
  double ref = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i)
    ref += conv[i].real() * sq[i].real();
  ref *= g.h() * g.h();
  CHECK(hartree_energy(w, psi) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(hartree_energy(w, psi) >= 0.0);
  // quartic homogeneity
  Field p2 = psi;
  p2 *= 1.7;
  CHECK(hartree_energy(w, p2) ==
        doctest::Approx(std::pow(1.7, 4) * hartree_energy(w, psi))
            .epsilon(1e-12));
  // pairing route
  const cplx pair = inner(hartree_term(w, psi), psi);
  CHECK(hartree_energy(w, psi) == doctest::Approx(pair.real()).epsilon(1e-12));
}

TEST_CASE("self-adjoint pairing of the convolution") {
  GridSpec g(20.0, 64);
  Potential w = make_gaussian(0.8, g);
  Rng rng(227);
  for (int t = 0; t < 20; ++t) {
    Field f = random_real_field(g, rng);
    Field h = random_real_field(g, rng);
    const cplx lhs = inner(convolve(w.w_hat, f), h);
    const cplx rhs = inner(f, convolve(w.w_hat, h));
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("quartic pairing bound constant is stable") {
  GridSpec g(20.0, 64);
  Potential w = make_gaussian(1.0, g);
  Rng rng(229);
  double cmax = 0.0;
  for (int t = 0; t < 100; ++t) {
    Field a = random_field(g, rng), b = random_field(g, rng);
    Field prod(g, Space::position);
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * b[i];
    const Field conv = convolve(w.w_hat, prod);
    double l1 = 0.0;
    for (std::size_t i = 0; i < conv.size(); ++i)
      l1 += std::abs(conv[i] * a[i] * b[i]);
    l1 *= g.h() * g.h();
    const double na = l2_norm(a) + h1_seminorm(a);
    const double nb = l2_norm(b) + h1_seminorm(b);
    cmax = std::max(cmax, l1 / (na * na * nb * nb));
  }
  MESSAGE("four-field pairing constant <= ", cmax);
  CHECK(cmax < 10.0);
}
