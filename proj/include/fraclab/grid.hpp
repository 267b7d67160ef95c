#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace fraclab {

using Index = Eigen::Index;

/// Periodic computational domain: the torus [-L, L)^n sampled with N points
/// per axis. Samples sit at x_j = -L + j*spacing, frequencies at k/(2L) with
/// k in {-N/2, ..., N/2-1}.
class GridSpec {
 public:
  GridSpec(int dim, int points_per_axis, double half_width)
      : dim_(dim), points_(points_per_axis), half_width_(half_width) {
    if (dim_ != 1 && dim_ != 2)
      throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
    if (points_ < 8 || (points_ & (points_ - 1)) != 0)
      throw std::invalid_argument("GridSpec: points per axis must be a power of two >= 8");
    if (!(half_width_ > 0.0) || !std::isfinite(half_width_))
      throw std::invalid_argument("GridSpec: half width must be positive");
  }

  int dim() const { return dim_; }
  int points() const { return points_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double cell_volume() const { return std::pow(spacing(), dim_); }
  Index size() const { return dim_ == 1 ? Index(points_) : Index(points_) * points_; }

  double coordinate(int i) const { return -half_width_ + i * spacing(); }
  /// Signed lattice index k of DFT bin i.
  int wavenumber(int i) const { return i < points_ / 2 ? i : i - points_; }
  double frequency(int i) const { return wavenumber(i) / (2.0 * half_width_); }

  /// Row-major index split: axis 0 is the slow (x) axis.
  std::array<int, 2> unravel(Index flat) const {
    if (dim_ == 1) return {int(flat), 0};
    return {int(flat / points_), int(flat % points_)};
  }
  Index ravel(int i0, int i1 = 0) const {
    return dim_ == 1 ? Index(i0) : Index(i0) * points_ + i1;
  }

  /// Physical point of sample `flat`; the second entry is 0 for n = 1.
  std::array<double, 2> point(Index flat) const {
    auto [i0, i1] = unravel(flat);
    return {coordinate(i0), dim_ == 1 ? 0.0 : coordinate(i1)};
  }
  std::array<double, 2> frequency_at(Index flat) const {
    auto [i0, i1] = unravel(flat);
    return {frequency(i0), dim_ == 1 ? 0.0 : frequency(i1)};
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  int points_;
  double half_width_;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

/// Complex samples on a GridSpec. Immutable in spirit: every operation returns
/// a new field. Construction rejects non-finite samples.
template <typename Real>
class Field {
 public:
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Field(const GridSpec& grid) : grid_(grid), values_(Vector::Zero(grid.size())) {}

  Field(const GridSpec& grid, Vector values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("Field: sample count does not match grid");
    if (!values_.allFinite()) throw std::invalid_argument("Field: non-finite sample");
  }

  static Field constant(const GridSpec& grid, Scalar c) {
    return Field(grid, Vector::Constant(grid.size(), c));
  }

  /// Samples fn(x) for n = 1 or fn(z = x + iy) for n = 2.
  template <typename Fn>
  static Field sample(const GridSpec& grid, Fn&& fn) {
    Vector v(grid.size());
    for (Index i = 0; i < v.size(); ++i) {
      auto p = grid.point(i);
      if constexpr (std::is_invocable_v<Fn, std::complex<double>>) {
        v[i] = Scalar(fn(std::complex<double>(p[0], p[1])));
      } else {
        v[i] = Scalar(fn(p[0]));
      }
    }
    return Field(grid, std::move(v));
  }

  const GridSpec& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Scalar operator[](Index i) const { return values_[i]; }
  Index size() const { return values_.size(); }

  Scalar mean() const { return values_.mean(); }
  Real sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : Real(0); }

  Field conj() const { return Field(grid_, values_.conjugate(), Unchecked{}); }

  template <typename Fn>
  Field map(Fn&& fn) const {
    Vector v(values_.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
    return Field(grid_, std::move(v));
  }

  friend Field operator+(const Field& a, const Field& b) {
    require_same_grid(a.grid_, b.grid_, "Field +");
    return Field(a.grid_, a.values_ + b.values_, Unchecked{});
  }
  friend Field operator-(const Field& a, const Field& b) {
    require_same_grid(a.grid_, b.grid_, "Field -");
    return Field(a.grid_, a.values_ - b.values_, Unchecked{});
  }
  /// Pointwise product.
  friend Field operator*(const Field& a, const Field& b) {
    require_same_grid(a.grid_, b.grid_, "Field *");
    return Field(a.grid_, a.values_.cwiseProduct(b.values_), Unchecked{});
  }
  friend Field operator*(Scalar c, const Field& a) { return Field(a.grid_, c * a.values_, Unchecked{}); }
  friend Field operator*(const Field& a, Scalar c) { return c * a; }
  friend Field operator+(const Field& a, Scalar c) {
    return Field(a.grid_, (a.values_.array() + c).matrix(), Unchecked{});
  }
  friend Field operator+(Scalar c, const Field& a) { return a + c; }
  friend Field operator-(const Field& a, Scalar c) { return a + (-c); }
  friend Field operator-(const Field& a) { return Field(a.grid_, -a.values_, Unchecked{}); }

 private:
  struct Unchecked {};
  Field(const GridSpec& grid, Vector values, Unchecked) : grid_(grid), values_(std::move(values)) {}

  GridSpec grid_;
  Vector values_;
};

using ComplexField = Field<double>;

/// Unitary DFT coefficients of a field, stored in the same index layout as the
/// samples: bin i on each axis carries wavenumber grid.wavenumber(i).
template <typename Real>
struct SpectralField {
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  GridSpec grid;
  Vector coefficients;
};

namespace detail {

template <typename Real>
Eigen::FFT<Real>& fft_engine() {
  thread_local Eigen::FFT<Real> engine;
  return engine;
}

// In-place DFT along both axes. Eigen's inverse carries the 1/N factor.
template <typename Real>
void transform(const GridSpec& grid, Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& data,
               bool forward) {
  using Scalar = std::complex<Real>;
  auto& fft = fft_engine<Real>();
  const int n = grid.points();
  std::vector<Scalar> in(n), out(n);
  auto run = [&](Index offset, Index stride) {
    for (int j = 0; j < n; ++j) in[j] = data[offset + j * stride];
    if (forward) fft.fwd(out.data(), in.data(), n);
    else fft.inv(out.data(), in.data(), n);
    for (int j = 0; j < n; ++j) data[offset + j * stride] = out[j];
  };
  if (grid.dim() == 1) {
    run(0, 1);
    return;
  }
  for (int r = 0; r < n; ++r) run(Index(r) * n, 1);
  for (int c = 0; c < n; ++c) run(c, n);
}

}  // namespace detail

template <typename Real>
SpectralField<Real> to_spectral(const Field<Real>& f) {
  typename SpectralField<Real>::Vector c = f.values();
  detail::transform<Real>(f.grid(), c, true);
  c *= Real(1) / std::sqrt(Real(f.size()));
  return {f.grid(), std::move(c)};
}

template <typename Real>
Field<Real> to_physical(const SpectralField<Real>& s) {
  typename Field<Real>::Vector v = s.coefficients;
  detail::transform<Real>(s.grid, v, false);
  v *= std::sqrt(Real(v.size()));
  return Field<Real>(s.grid, std::move(v));
}

/// Riemann-sum L^p norm with weight spacing^n; p = infinity gives the sup norm.
template <typename Real>
Real lp_norm(const Field<Real>& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.sup_norm();
  const auto a = f.values().cwiseAbs();
  const Real peak = a.size() ? a.maxCoeff() : Real(0);
  if (peak == Real(0)) return Real(0);
  // Scale by the peak so that large p cannot overflow.
  Real acc = (a.array() / peak).pow(Real(p)).sum();
  return peak * std::pow(acc * Real(f.grid().cell_volume()), Real(1.0 / p));
}

/// Periodic shift g(x) = f(x + h) with h = shift * spacing per axis.
template <typename Real>
Field<Real> translate(const Field<Real>& f, std::array<int, 2> shift) {
  const GridSpec& g = f.grid();
  const int n = g.points();
  if (g.dim() == 1 && shift[1] != 0)
    throw std::invalid_argument("translate: second shift component must be 0 in 1D");
  typename Field<Real>::Vector v(f.size());
  auto wrap = [n](long i) { return int(((i % n) + n) % n); };
  for (Index i = 0; i < v.size(); ++i) {
    auto [i0, i1] = g.unravel(i);
    v[i] = f[g.ravel(wrap(long(i0) + shift[0]), g.dim() == 1 ? 0 : wrap(long(i1) + shift[1]))];
  }
  return Field<Real>(g, std::move(v));
}

/// Physical-shift overload; rejects shifts that are not lattice multiples.
template <typename Real>
Field<Real> translate(const Field<Real>& f, std::array<double, 2> h) {
  const double dx = f.grid().spacing();
  std::array<int, 2> s{};
  for (int a = 0; a < 2; ++a) {
    const double q = h[a] / dx;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
      throw std::invalid_argument("translate: shift is not a lattice vector");
    s[a] = int(r);
  }
  return translate(f, s);
}

template <typename Real>
Field<Real> remove_mean(const Field<Real>& f) {
  return f - f.mean();
}

/// Relative L2 distance ||a - b|| / ||b|| (plain Euclidean, weights cancel).
template <typename Real>
Real relative_l2(const Field<Real>& a, const Field<Real>& b) {
  require_same_grid(a.grid(), b.grid(), "relative_l2");
  const Real den = b.values().norm();
  const Real num = (a.values() - b.values()).norm();
  return den == Real(0) ? num : num / den;
}

}  // namespace fraclab
