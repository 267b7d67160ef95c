#include "fraclab/families.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace fraclab::families {

namespace {

double radius_of(const GridSpec& g, Index i, std::complex<double> centre) {
  const auto p = g.point(i);
  return std::hypot(p[0] - centre.real(), p[1] - centre.imag());
}

// Unnormalised profile exp(-1/(1-s^2)) of the mollifier, s = |x|/eps.
double bump_profile(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// int_0^1 exp(-1/(1-s^2)) s ds: the planar radial mass of the profile.
double planar_profile_mass() {
  static const double mass = [] {
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = (i + 0.5) / n;
      acc += bump_profile(s) * s;
    }
    return acc / n;
  }();
  return mass;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

ComplexField smooth_bump(const GridSpec& grid, double k, double radius, std::complex<double> centre) {
  if (!(radius > 0.0)) throw std::invalid_argument("smooth_bump: radius must be positive");
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double s = radius_of(grid, i, centre) / radius;
    v[i] = s < 1.0 ? k * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
  }
  return ComplexField(grid, std::move(v));
}

ComplexField mollifier(const GridSpec& grid, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier: eps must be positive");
  ComplexField::Vector v(grid.size());
  const double dx = grid.spacing();
  for (Index i = 0; i < v.size(); ++i) {
    auto [a, b] = grid.unravel(i);
    const double r = dx * std::hypot(double(grid.wavenumber(a)), grid.dim() == 2 ? double(grid.wavenumber(b)) : 0.0);
    v[i] = bump_profile(r / eps);
  }
  const double mass = v.real().sum();
  v /= mass * grid.cell_volume();
  return ComplexField(grid, std::move(v));
}

ComplexField mollify(const ComplexField& f, double eps) {
  const auto kernel = to_spectral(mollifier(f.grid(), eps));
  auto spectrum = to_spectral(f);
  // Unitary DFT: the circular convolution picks up sqrt(N^n) * spacing^n.
  const double scale = std::sqrt(double(f.size())) * f.grid().cell_volume();
  spectrum.coefficients = scale * spectrum.coefficients.cwiseProduct(kernel.coefficients);
  return to_physical(spectrum);
}

ComplexField mollified_disk(const GridSpec& grid, double k, double eps, double radius) {
  if (grid.dim() != 2) throw std::invalid_argument("mollified_disk: planar grid required");
  if (!(eps > 0.0) || !(radius > 0.0)) throw std::invalid_argument("mollified_disk: eps and radius must be positive");
  // m(r) = int_0^eps rho(s) s theta(r, s) ds, theta = angle of the circle of
  // radius s about a point at distance r that lies inside the disk.
  const double norm = 1.0 / (2.0 * std::numbers::pi * planar_profile_mass() * eps * eps);
  const int panels = 64, per = 8;
  static const double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  auto profile = [&](double r) {
    if (r <= radius - eps) return 1.0;
    if (r >= radius + eps) return 0.0;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double lo = eps * p / panels, hi = eps * (p + 1) / panels;
      for (int q = 0; q < per; ++q) {
        const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl_x[q];
        double theta;
        if (r == 0.0) theta = s < radius ? 2.0 * std::numbers::pi : 0.0;
        else theta = 2.0 * std::acos(std::clamp((r * r + s * s - radius * radius) / (2.0 * r * s), -1.0, 1.0));
        acc += 0.5 * (hi - lo) * gl_w[q] * bump_profile(s / eps) * norm * s * theta;
      }
    }
    return std::clamp(acc, 0.0, 1.0);
  };
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = k * profile(radius_of(grid, i, {}));
  return ComplexField(grid, std::move(v));
}

double log_example_radius(double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("log_example: k must lie in (0,1)");
  return std::exp(0.5 - 0.5 / k);
}

double log_example_window(double r, double k, double taper_start) {
  if (!(taper_start > 0.0 && taper_start < 1.0)) throw std::invalid_argument("log_example: taper start in (0,1)");
  const double rw = log_example_radius(k);
  return 1.0 - smooth_step((r - taper_start * rw) / ((1.0 - taper_start) * rw));
}

namespace {

template <typename Fn>
ComplexField log_sampled(const GridSpec& grid, double k, double taper_start, Fn&& value) {
  if (grid.dim() != 2) throw std::invalid_argument("log_example: planar grid required");
  const std::complex<double> centre(-0.5 * grid.spacing(), -0.5 * grid.spacing());
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) {
    const auto p = grid.point(i);
    const std::complex<double> z = std::complex<double>(p[0], p[1]) - centre;
    const double w = log_example_window(std::abs(z), k, taper_start);
    v[i] = w == 0.0 ? std::complex<double>(0.0) : w * value(z);
  }
  return ComplexField(grid, std::move(v));
}

}  // namespace

ComplexField log_example(const GridSpec& grid, double k, double taper_start) {
  return log_sampled(grid, k, taper_start, [](std::complex<double> z) {
    return (z / (2.0 * std::conj(z))) / (std::log(std::abs(z)) - 0.5);
  });
}

ComplexField log_example_derivative(const GridSpec& grid, double k, double taper_start) {
  return log_sampled(grid, k, taper_start,
                     [](std::complex<double> z) { return std::complex<double>(std::log(std::abs(z)) - 0.5); });
}

ComplexField random_bandlimited(const GridSpec& grid, double k, std::uint64_t seed, double radius, int band) {
  if (!(radius > 0.0) || band < 1) throw std::invalid_argument("random_bandlimited: bad radius or band");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  struct Mode {
    int k1, k2;
    std::complex<double> amp;
  };
  std::vector<Mode> modes;
  const int band2 = grid.dim() == 2 ? band : 0;
  for (int a = -band; a <= band; ++a)
    for (int b = -band2; b <= band2; ++b) modes.push_back({a, b, {gauss(rng), gauss(rng)}});
  const double f0 = std::numbers::pi / radius;  // period 2 * radius
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) {
    const auto p = grid.point(i);
    const double r = std::hypot(p[0], p[1]);
    const double w = 1.0 - smooth_step((r - 0.5 * radius) / (0.5 * radius));
    std::complex<double> acc = 0.0;
    if (w > 0.0)
      for (const auto& m : modes) acc += m.amp * std::polar(1.0, f0 * (m.k1 * p[0] + m.k2 * p[1]));
    v[i] = w * acc;
  }
  ComplexField f(grid, std::move(v));
  const double peak = f.sup_norm();
  if (peak == 0.0) return f;
  return std::complex<double>(k / peak) * f;
}

ComplexField tent(const GridSpec& grid, double k, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("tent: radius must be positive");
  ComplexField::Vector v(grid.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = k * std::max(0.0, 1.0 - radius_of(grid, i, {}) / radius);
  return ComplexField(grid, std::move(v));
}

}  // namespace fraclab::families
