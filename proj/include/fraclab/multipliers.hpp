#pragma once

#include "fraclab/grid.hpp"

#include <functional>
#include <numbers>

namespace fraclab {

/// Lattice frequency in cycles per unit length; xi2 = 0 in 1D.
struct Frequency {
  double xi1 = 0.0;
  double xi2 = 0.0;

  double norm() const { return std::hypot(xi1, xi2); }
  /// xi1 + i xi2, the complex frequency used by the planar operators.
  std::complex<double> complex() const { return {xi1, xi2}; }
};

enum class ZeroMode { annihilate, identity };

/// Fourier multiplier. `evaluate` is only called at nonzero lattice
/// frequencies; the zero mode follows `zero_mode`.
struct MultiplierSymbol {
  std::function<std::complex<double>(const Frequency&)> evaluate;
  ZeroMode zero_mode = ZeroMode::annihilate;
};

template <typename Real>
Field<Real> apply_multiplier(const MultiplierSymbol& symbol, const Field<Real>& f) {
  using Scalar = std::complex<Real>;
  auto spectrum = to_spectral(f);
  const GridSpec& g = f.grid();
  auto& c = spectrum.coefficients;
  for (Index i = 0; i < c.size(); ++i) {
    if (i == 0) {
      if (symbol.zero_mode == ZeroMode::annihilate) c[0] = Scalar(0);
      continue;
    }
    const auto xi = g.frequency_at(i);
    c[i] *= Scalar(symbol.evaluate(Frequency{xi[0], xi[1]}));
  }
  return to_physical(spectrum);
}

namespace symbols {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline void require_order(double beta, const char* who) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument(std::string(who) + ": order must lie in (0,1)");
}

/// (2 pi |xi|)^beta. Under f^(xi) = int f e^{-2 pi i x.xi} this makes D^1 = sqrt(-Laplacian).
inline MultiplierSymbol frac_laplacian(double beta) {
  require_order(beta, "frac_laplacian");
  return {[beta](const Frequency& xi) { return std::complex<double>(std::pow(two_pi * xi.norm(), beta)); },
          ZeroMode::annihilate};
}

inline MultiplierSymbol riesz_potential(double beta) {
  require_order(beta, "riesz_potential");
  return {[beta](const Frequency& xi) { return std::complex<double>(std::pow(two_pi * xi.norm(), -beta)); },
          ZeroMode::annihilate};
}

/// -i xi_j / |xi|.
inline MultiplierSymbol riesz_transform(int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("riesz_transform: axis must be 1 or 2");
  return {[axis](const Frequency& xi) {
            const double comp = axis == 1 ? xi.xi1 : xi.xi2;
            return std::complex<double>(0.0, -comp / xi.norm());
          },
          ZeroMode::annihilate};
}

/// conj(xi) / xi with xi = xi1 + i xi2.
inline MultiplierSymbol beurling() {
  return {[](const Frequency& xi) {
            const auto w = xi.complex();
            return std::conj(w) / w;
          },
          ZeroMode::annihilate};
}

/// 1 / (pi i xi): the right inverse of dbar on mean-zero fields.
inline MultiplierSymbol cauchy() {
  return {[](const Frequency& xi) {
            return 1.0 / (std::complex<double>(0.0, std::numbers::pi) * xi.complex());
          },
          ZeroMode::annihilate};
}

/// dz = (d_x - i d_y)/2  ->  pi i conj(xi).
inline MultiplierSymbol dz() {
  return {[](const Frequency& xi) { return std::complex<double>(0.0, std::numbers::pi) * std::conj(xi.complex()); },
          ZeroMode::annihilate};
}

/// dbar = (d_x + i d_y)/2  ->  pi i xi.
inline MultiplierSymbol dbar() {
  return {[](const Frequency& xi) { return std::complex<double>(0.0, std::numbers::pi) * xi.complex(); },
          ZeroMode::annihilate};
}

/// d / dx_axis  ->  2 pi i xi_axis.
inline MultiplierSymbol partial(int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("partial: axis must be 1 or 2");
  return {[axis](const Frequency& xi) {
            return std::complex<double>(0.0, two_pi * (axis == 1 ? xi.xi1 : xi.xi2));
          },
          ZeroMode::annihilate};
}

}  // namespace symbols

namespace detail {
inline void require_planar(const GridSpec& g, const char* who) {
  if (g.dim() != 2) throw std::invalid_argument(std::string(who) + ": requires a planar (n = 2) grid");
}
}  // namespace detail

template <typename Real>
Field<Real> frac_laplacian(const Field<Real>& f, double beta) {
  return apply_multiplier(symbols::frac_laplacian(beta), f);
}

template <typename Real>
Field<Real> riesz_potential(const Field<Real>& f, double beta) {
  return apply_multiplier(symbols::riesz_potential(beta), f);
}

/// R_j for j in {1, 2}; in 1D only j = 1 exists (the Hilbert-type transform -i sign xi).
template <typename Real>
Field<Real> riesz_transform(const Field<Real>& f, int axis) {
  if (axis > f.grid().dim()) throw std::invalid_argument("riesz_transform: axis exceeds dimension");
  return apply_multiplier(symbols::riesz_transform(axis), f);
}

template <typename Real>
Field<Real> beurling(const Field<Real>& f) {
  detail::require_planar(f.grid(), "beurling");
  return apply_multiplier(symbols::beurling(), f);
}

template <typename Real>
Field<Real> conj_beurling(const Field<Real>& f) {
  return beurling(f).conj();
}

template <typename Real>
Field<Real> cauchy_transform(const Field<Real>& h) {
  detail::require_planar(h.grid(), "cauchy_transform");
  return apply_multiplier(symbols::cauchy(), h);
}

template <typename Real>
Field<Real> dz(const Field<Real>& f) {
  detail::require_planar(f.grid(), "dz");
  return apply_multiplier(symbols::dz(), f);
}

template <typename Real>
Field<Real> dbar(const Field<Real>& f) {
  detail::require_planar(f.grid(), "dbar");
  return apply_multiplier(symbols::dbar(), f);
}

template <typename Real>
Field<Real> partial(const Field<Real>& f, int axis) {
  if (axis > f.grid().dim()) throw std::invalid_argument("partial: axis exceeds dimension");
  return apply_multiplier(symbols::partial(axis), f);
}

/// D^{1-alpha} (R_1 + i R_2) D^alpha f, applied as four separate multipliers.
template <typename Real>
Field<Real> riesz_dbar_representation(const Field<Real>& f, double alpha) {
  detail::require_planar(f.grid(), "riesz_dbar_representation");
  const auto inner = frac_laplacian(f, alpha);
  const auto rotated = riesz_transform(inner, 1) + std::complex<Real>(0, 1) * riesz_transform(inner, 2);
  return frac_laplacian(rotated, 1.0 - alpha);
}

struct RieszConstant {
  std::complex<double> constant;
  /// ||dbar f - c * rep f|| / ||dbar f||.
  double residual = 0.0;
};

/// Least-squares constant c with dbar f = c * riesz_dbar_representation(f).
template <typename Real>
RieszConstant measure_riesz_constant(const Field<Real>& f, double alpha) {
  const auto direct = dbar(f);
  const auto rep = riesz_dbar_representation(f, alpha);
  const auto den = rep.values().squaredNorm();
  if (den == Real(0)) throw std::invalid_argument("measure_riesz_constant: field has no nonzero modes");
  const std::complex<double> c = std::complex<double>(rep.values().dot(direct.values())) / double(den);
  const auto fit = std::complex<Real>(c) * rep;
  return {c, double(relative_l2(fit, direct))};
}

}  // namespace fraclab
