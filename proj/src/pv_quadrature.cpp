#include "fraclab/pv_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraclab {

double pv_constant(int dim, double beta) {
  if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("pv_constant: beta must lie in (0,2)");
  const double s = 0.5 * beta;
  return std::pow(4.0, s) * std::tgamma(0.5 * dim + s) /
         (std::pow(std::numbers::pi, 0.5 * dim) * std::abs(std::tgamma(-s)));
}

PVKernelParams PVKernelParams::make(int dim, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("PVKernelParams: beta must lie in (0,1)");
  if (dim != 1 && dim != 2) throw std::invalid_argument("PVKernelParams: dim must be 1 or 2");
  return {beta, dim, pv_constant(dim, beta)};
}

double dirichlet_beta(double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dirichlet_beta: s must be positive");
  // Cohen, Rodriguez Villegas, Zagier acceleration of the alternating series.
  constexpr int n = 48;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

double lattice_zeta(int dim, double sigma) {
  if (dim == 1) return 2.0 * std::riemann_zeta(sigma);
  if (dim == 2) return 4.0 * std::riemann_zeta(0.5 * sigma) * dirichlet_beta(0.5 * sigma);
  throw std::invalid_argument("lattice_zeta: dim must be 1 or 2");
}

namespace {

// Images |m|_inf <= M are summed directly; the rest is the midpoint-rule
// integral over the exterior of the square covered by the summed cells.
double image_sum_1d(double z, double period, double exponent) {
  constexpr int M = 256;
  double s = 0.0;
  for (int m = -M; m <= M; ++m) {
    const double r = std::abs(z + period * m);
    if (r > 0.0) s += std::pow(r, -exponent);
  }
  const double h = (M + 0.5) * period;
  const double tail = (std::pow(h + z, 1.0 - exponent) + std::pow(h - z, 1.0 - exponent)) / (exponent - 1.0);
  return s + tail / period;
}

// int over the exterior of [z1-h, z1+h] x [z2-h, z2+h] of |v|^{-exponent}
// = 1/(exponent-2) * int_0^{2pi} r(theta)^{2-exponent} dtheta.
double square_exterior_integral(double z1, double z2, double h, double exponent) {
  static const std::array<double, 24> nodes = [] {
    std::array<double, 24> x{};
    // Gauss-Legendre nodes by Newton iteration on P_24.
    const int n = 24;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
    }
    return x;
  }();
  static const std::array<double, 24> weights = [] {
    std::array<double, 24> w{};
    const int n = 24;
    for (int i = 0; i < n; ++i) {
      const double t = nodes[i];
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return w;
  }();
  const double g = exponent - 2.0;
  // Each side: distance a from the origin, tangential extent [lo, hi].
  const std::array<std::array<double, 3>, 4> sides{{{h + z1, z2 - h, z2 + h},
                                                    {h - z1, -(z2 + h), -(z2 - h)},
                                                    {h + z2, -(z1 + h), -(z1 - h)},
                                                    {h - z2, z1 - h, z1 + h}}};
  double total = 0.0;
  for (const auto& [a, lo, hi] : sides) {
    const double t0 = std::atan2(lo, a), t1 = std::atan2(hi, a);
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    double acc = 0.0;
    for (int i = 0; i < 24; ++i) {
      const double th = mid + half * nodes[i];
      acc += weights[i] * std::pow(a / std::cos(th), -g);
    }
    total += acc * half;
  }
  return total / g;
}

double image_sum_2d(double z1, double z2, double period, double exponent) {
  constexpr int M = 12;
  double s = 0.0;
  for (int m1 = -M; m1 <= M; ++m1) {
    const double a = z1 + period * m1;
    for (int m2 = -M; m2 <= M; ++m2) {
      const double b = z2 + period * m2;
      const double r2 = a * a + b * b;
      if (r2 > 0.0) s += std::pow(r2, -0.5 * exponent);
    }
  }
  const double h = (M + 0.5) * period;
  return s + square_exterior_integral(z1, z2, h, exponent) / (period * period);
}

}  // namespace

std::vector<double> periodized_kernel(const GridSpec& grid, double exponent) {
  if (!(exponent > grid.dim())) throw std::invalid_argument("periodized_kernel: exponent must exceed dimension");
  const int n = grid.points();
  const double dx = grid.spacing();
  const double period = 2.0 * grid.half_width();
  std::vector<double> table(std::size_t(grid.size()), 0.0);
  if (grid.dim() == 1) {
    for (int a = 1; a <= n / 2; ++a) {
      const double v = image_sum_1d(a * dx, period, exponent);
      table[a] = v;
      table[(n - a) % n] = v;
    }
    return table;
  }
  // Symmetric under sign flips and axis swap: evaluate 0 <= a <= b <= n/2.
  for (int a = 0; a <= n / 2; ++a) {
    for (int b = a; b <= n / 2; ++b) {
      if (a == 0 && b == 0) continue;
      const double v = image_sum_2d(a * dx, b * dx, period, exponent);
      for (int sa : {a, (n - a) % n})
        for (int sb : {b, (n - b) % n}) {
          table[std::size_t(sa) * n + sb] = v;
          table[std::size_t(sb) * n + sa] = v;
        }
    }
  }
  return table;
}

ComplexField fd_laplacian(const ComplexField& f) {
  const GridSpec& g = f.grid();
  const int n = g.points();
  const double w = 1.0 / (12.0 * g.spacing() * g.spacing());
  ComplexField::Vector out = ComplexField::Vector::Zero(f.size());
  auto at = [&](int i0, int i1) { return f[g.ravel(((i0 % n) + n) % n, g.dim() == 1 ? 0 : ((i1 % n) + n) % n)]; };
  for (Index i = 0; i < f.size(); ++i) {
    auto [i0, i1] = g.unravel(i);
    std::complex<double> acc =
        -at(i0 - 2, i1) + 16.0 * at(i0 - 1, i1) - 30.0 * at(i0, i1) + 16.0 * at(i0 + 1, i1) - at(i0 + 2, i1);
    if (g.dim() == 2)
      acc += -at(i0, i1 - 2) + 16.0 * at(i0, i1 - 1) - 30.0 * at(i0, i1) + 16.0 * at(i0, i1 + 1) - at(i0, i1 + 2);
    out[i] = w * acc;
  }
  return ComplexField(g, std::move(out));
}

ComplexField pv_frac_laplacian(const ComplexField& f, const PVKernelParams& params, double cutoff) {
  const GridSpec& g = f.grid();
  if (g.dim() != params.dim) throw std::invalid_argument("pv_frac_laplacian: dimension mismatch");
  const double dx = g.spacing();
  if (cutoff < dx * (1.0 - 1e-12)) throw std::invalid_argument("pv_frac_laplacian: cutoff below grid spacing");
  if (cutoff > 0.5 * g.half_width()) throw std::invalid_argument("pv_frac_laplacian: cutoff exceeds L/2");

  const int n = g.points();
  const int dim = g.dim();
  const double beta = params.beta;
  std::vector<double> kernel = periodized_kernel(g, dim + beta);

  // Excluded near field and its lattice moment sum_{0<|m|<cutoff/h} |m|^{2-n-beta}.
  const double rc = cutoff / dx;
  double excluded_moment = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    auto [a, b] = g.unravel(i);
    const double m1 = g.wavenumber(a), m2 = dim == 2 ? g.wavenumber(b) : 0.0;
    const double r = std::hypot(m1, m2);
    if (r > 0.0 && r < rc * (1.0 - 1e-12)) {
      kernel[std::size_t(i)] = 0.0;
      excluded_moment += std::pow(r, 2.0 - dim - beta);
    }
  }

  double kernel_sum = 0.0;
  for (double k : kernel) kernel_sum += k;

  std::vector<double> re(std::size_t(f.size())), im(std::size_t(f.size()));
  for (Index i = 0; i < f.size(); ++i) {
    re[std::size_t(i)] = f[i].real();
    im[std::size_t(i)] = f[i].imag();
  }

  // conv(x) = sum_d u(x + d) K(d)
  std::vector<double> conv_re(re.size(), 0.0), conv_im(im.size(), 0.0);
  if (dim == 1) {
    for (int x = 0; x < n; ++x) {
      double ar = 0.0, ai = 0.0;
      for (int d = 0; d < n; ++d) {
        const int y = (x + d) & (n - 1);
        ar += kernel[d] * re[y];
        ai += kernel[d] * im[y];
      }
      conv_re[x] = ar;
      conv_im[x] = ai;
    }
  } else {
    for (int x0 = 0; x0 < n; ++x0) {
      for (int x1 = 0; x1 < n; ++x1) {
        double ar = 0.0, ai = 0.0;
        for (int d0 = 0; d0 < n; ++d0) {
          const double* krow = kernel.data() + std::size_t(d0) * n;
          const std::size_t row = std::size_t((x0 + d0) & (n - 1)) * n;
          const double* ur = re.data() + row;
          const double* ui = im.data() + row;
          const int split = n - x1;
          for (int d1 = 0; d1 < split; ++d1) {
            ar += krow[d1] * ur[x1 + d1];
            ai += krow[d1] * ui[x1 + d1];
          }
          for (int d1 = split; d1 < n; ++d1) {
            ar += krow[d1] * ur[x1 + d1 - n];
            ai += krow[d1] * ui[x1 + d1 - n];
          }
        }
        conv_re[std::size_t(x0) * n + x1] = ar;
        conv_im[std::size_t(x0) * n + x1] = ai;
      }
    }
  }

  const ComplexField lap = fd_laplacian(f);
  const double weight = g.cell_volume();
  const double local = std::pow(dx, 2.0 - beta) * (excluded_moment - lattice_zeta(dim, dim + beta - 2.0)) / (2.0 * dim);
  ComplexField::Vector out(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    const std::complex<double> u = f[i];
    const std::complex<double> conv(conv_re[std::size_t(i)], conv_im[std::size_t(i)]);
    out[i] = params.constant * ((u * kernel_sum - conv) * weight - local * lap[i]);
  }
  return ComplexField(g, std::move(out));
}

}  // namespace fraclab
