#pragma once

#include "fraclab/grid.hpp"

#include <random>

namespace fraclab::testing {

// i.i.d. complex Gaussian samples; not smooth, only for lattice identities.
inline ComplexField random_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexField::Vector v(g.size());
  for (auto& x : v) x = {gauss(rng), gauss(rng)};
  return ComplexField(g, std::move(v));
}

inline ComplexField random_mean_zero(const GridSpec& g, std::uint64_t seed) {
  return remove_mean(random_field(g, seed));
}

inline ComplexField gaussian(const GridSpec& g, double width, std::complex<double> centre = {}) {
  return ComplexField::sample(g, [&](std::complex<double> z) {
    return std::exp(-std::norm(z - centre) / (2.0 * width * width));
  });
}

// Lattice exponential exp(2 pi i x.xi) for wavenumbers (k1, k2).
inline ComplexField lattice_mode(const GridSpec& g, int k1, int k2 = 0) {
  const double f1 = k1 / (2.0 * g.half_width()), f2 = k2 / (2.0 * g.half_width());
  return ComplexField::sample(g, [&](std::complex<double> z) {
    return std::polar(1.0, 2.0 * 3.141592653589793 * (z.real() * f1 + z.imag() * f2));
  });
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace fraclab::testing
