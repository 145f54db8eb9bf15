// Periodic square grid and the discrete Fourier transform matching the
// symmetric 2D convention  u^(xi) = (2pi)^{-1} int e^{-i xi.x} u(x) dx,
// discretized as u^(xi_k) = (h^2/2pi) sum_x e^{-i xi_k.x} u(x).
//
// Storage convention (pinned for cross-run reproducibility): fields are
// row-major N x N.  Position index i maps to coordinate x = (i - N/2) h, so
// the origin is the cell (N/2, N/2).  Frequency index i maps to the integer
// mode k = i - N/2, lattice point xi = (2pi/L) k; the Nyquist mode k = -N/2
// occupies row/column 0 and has no +N/2 partner.
#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace sh2d {

using cplx = std::complex<double>;

struct GridSpec {
  double L = 40.0;  // box side
  int N = 256;      // cells per side, even

  GridSpec() = default;
  GridSpec(double L_, int N_) : L(L_), N(N_) {
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be positive");
    if (N < 2 || N % 2 != 0)
      throw std::invalid_argument("GridSpec: N must be even and >= 2");
  }

  double h() const { return L / N; }
  double dxi() const { return 2.0 * M_PI / L; }
  std::size_t size() const { return static_cast<std::size_t>(N) * N; }

  // coordinate of position row/column index i
  double coord(int i) const { return (i - N / 2) * h(); }
  // frequency of frequency row/column index i
  double freq(int i) const { return (i - N / 2) * dxi(); }
  // |xi|^2 at frequency index (i, j)
  double xi2(int i, int j) const {
    const double a = freq(i), b = freq(j);
    return a * a + b * b;
  }
  std::size_t origin_index() const {
    return static_cast<std::size_t>(N / 2) * N + N / 2;
  }

  bool operator==(const GridSpec& o) const { return L == o.L && N == o.N; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

enum class Space { position, frequency };

/// Complex grid function tagged with the space it lives in.
class Field {
 public:
  Field() = default;
  Field(const GridSpec& spec, Space space)
      : spec_(spec), space_(space), v_(spec.size(), cplx(0.0)) {}
  Field(const GridSpec& spec, Space space, std::vector<cplx> values)
      : spec_(spec), space_(space), v_(std::move(values)) {
    if (v_.size() != spec_.size())
      throw std::invalid_argument("Field: value count does not match grid");
  }

  const GridSpec& spec() const { return spec_; }
  Space space() const { return space_; }
  std::size_t size() const { return v_.size(); }

  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  cplx& at(int i, int j) { return v_[static_cast<std::size_t>(i) * spec_.N + j]; }
  const cplx& at(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * spec_.N + j];
  }

  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  Field& operator+=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Field& operator*=(cplx s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx s, Field a) { return a *= s; }
  friend Field operator*(Field a, cplx s) { return a *= s; }

 private:
  void check_compatible(const Field& o) const {
    if (spec_ != o.spec_ || space_ != o.space_)
      throw std::invalid_argument("Field: incompatible operands");
  }
  GridSpec spec_;
  Space space_ = Space::position;
  std::vector<cplx> v_;
};

namespace detail {

// Cached FFTW plans, one pair per grid size.  FFTW_ESTIMATE keeps planning
// deterministic for a given binary and machine.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine e;
    return e;
  }

  void transform(int N, std::vector<cplx>& data, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    Plans& p = plans(N);
    auto* buf = reinterpret_cast<fftw_complex*>(p.buf);
    std::copy(data.begin(), data.end(), reinterpret_cast<cplx*>(buf));
    fftw_execute(sign == FFTW_FORWARD ? p.fwd : p.bwd);
    std::copy(reinterpret_cast<cplx*>(buf),
              reinterpret_cast<cplx*>(buf) + data.size(), data.begin());
  }

 private:
  struct Plans {
    fftw_plan fwd = nullptr, bwd = nullptr;
    void* buf = nullptr;
  };

  Plans& plans(int N) {
    auto it = cache_.find(N);
    if (it != cache_.end()) return it->second;
    Plans p;
    const std::size_t n = static_cast<std::size_t>(N) * N;
    p.buf = fftw_malloc(sizeof(fftw_complex) * n);
    auto* b = reinterpret_cast<fftw_complex*>(p.buf);
    p.fwd = fftw_plan_dft_2d(N, N, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_2d(N, N, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache_.emplace(N, p).first->second;
  }

  ~FftEngine() {
    for (auto& [N, p] : cache_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
      fftw_free(p.buf);
    }
  }

  std::map<int, Plans> cache_;
  std::mutex mu_;
};

// DFT with the centered-index bookkeeping.  Both directions reduce to a raw
// FFT plus an fftshift and a (-1)^{i+j} checkerboard sign.
inline Field centered_dft(const Field& u, int sign, double scale) {
  const GridSpec& g = u.spec();
  const int N = g.N;
  std::vector<cplx> work(g.size());
  if (sign == FFTW_FORWARD) {
    work = u.values();
    FftEngine::instance().transform(N, work, FFTW_FORWARD);
    std::vector<cplx> out(g.size());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const int mi = (i + N / 2) % N, mj = (j + N / 2) % N;
        const double sgn = ((i + j) & 1) ? -1.0 : 1.0;
        out[static_cast<std::size_t>(i) * N + j] =
            scale * sgn * work[static_cast<std::size_t>(mi) * N + mj];
      }
    return Field(g, Space::frequency, std::move(out));
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const int mi = (i + N / 2) % N, mj = (j + N / 2) % N;
      const double sgn = ((i + j) & 1) ? -1.0 : 1.0;
      work[static_cast<std::size_t>(mi) * N + mj] = sgn * u.at(i, j);
    }
  FftEngine::instance().transform(N, work, FFTW_BACKWARD);
  for (auto& x : work) x *= scale;
  return Field(g, Space::position, std::move(work));
}

}  // namespace detail

/// Forward transform; Parseval holds: h^2 sum|u|^2 = dxi^2 sum|u^|^2.
inline Field to_frequency(const Field& u) {
  if (u.space() != Space::position)
    throw std::invalid_argument("to_frequency: field not in position space");
  const GridSpec& g = u.spec();
  return detail::centered_dft(u, FFTW_FORWARD, g.h() * g.h() / (2.0 * M_PI));
}

inline Field to_position(const Field& u) {
  if (u.space() != Space::frequency)
    throw std::invalid_argument("to_position: field not in frequency space");
  const GridSpec& g = u.spec();
  return detail::centered_dft(u, FFTW_BACKWARD, g.dxi() * g.dxi() / (2.0 * M_PI));
}

/// Spectral convolution w*u; the 2pi factor is the convolution-theorem
/// constant of the symmetric d=2 transform convention.
inline Field convolve(const Field& w_hat, const Field& u) {
  if (w_hat.spec() != u.spec())
    throw std::invalid_argument("convolve: grid spec mismatch");
  if (w_hat.space() != Space::frequency)
    throw std::invalid_argument("convolve: kernel must be in frequency space");
  Field uh = to_frequency(u);
  for (std::size_t i = 0; i < uh.size(); ++i)
    uh[i] *= 2.0 * M_PI * w_hat[i];
  return to_position(uh);
}

/// L2 inner product h^2 sum a conj(b) of position fields (frequency fields
/// pair with dxi^2 weight, consistent with Parseval).
inline cplx inner(const Field& a, const Field& b) {
  if (a.spec() != b.spec() || a.space() != b.space())
    throw std::invalid_argument("inner: incompatible fields");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  const GridSpec& g = a.spec();
  const double w = a.space() == Space::position ? g.h() : g.dxi();
  return s * (w * w);
}

/// Bilinear pairing h^2 sum a b (no conjugation), used for the
/// analytically-continued rank-one resolvent term at complex frequency.
inline cplx pair_bilinear(const Field& a, const Field& b) {
  if (a.spec() != b.spec() || a.space() != b.space())
    throw std::invalid_argument("pair_bilinear: incompatible fields");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  const GridSpec& g = a.spec();
  const double w = a.space() == Space::position ? g.h() : g.dxi();
  return s * (w * w);
}

inline double l2_norm(const Field& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(u[i]);
  const GridSpec& g = u.spec();
  const double w = u.space() == Space::position ? g.h() : g.dxi();
  return w * std::sqrt(s);
}

inline double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: p must lie in [1, inf)");
  if (u.space() != Space::position)
    throw std::invalid_argument("lp_norm: field must be in position space");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::pow(std::abs(u[i]), p);
  const double h = u.spec().h();
  return std::pow(h * h * s, 1.0 / p);
}

/// |psi|_{H^1} seminorm: dxi^2 sum |xi|^2 |u^|^2, via the transform if needed.
inline double h1_seminorm(const Field& u) {
  const Field uh = u.space() == Space::frequency ? u : to_frequency(u);
  const GridSpec& g = u.spec();
  double s = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) s += g.xi2(i, j) * std::norm(uh.at(i, j));
  return g.dxi() * std::sqrt(s);
}

}  // namespace sh2d
