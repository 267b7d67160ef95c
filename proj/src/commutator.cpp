#include "fraclab/commutator.hpp"

#include "fraclab/multipliers.hpp"
#include "fraclab/pv_quadrature.hpp"

#include <algorithm>
#include <numbers>

namespace fraclab {

ComplexField commutator_apply(const ComplexField& b, const ComplexField& f, double beta) {
  require_same_grid(b.grid(), f.grid(), "commutator_apply");
  return b * frac_laplacian(f, beta) - frac_laplacian(b * f, beta);
}

namespace {

// Minimum-image distance between samples i and j.
double torus_distance(const GridSpec& g, Index i, Index j) {
  const int n = g.points();
  auto [i0, i1] = g.unravel(i);
  auto [j0, j1] = g.unravel(j);
  auto wrap = [n](int d) {
    d = ((d % n) + n) % n;
    return std::min(d, n - d);
  };
  const double d0 = wrap(i0 - j0), d1 = wrap(i1 - j1);
  return g.spacing() * std::hypot(d0, d1);
}

void require_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("commutator: beta must lie in (0,1)");
}

// C_{n,beta} k(d) spacing^n over the displacement lattice (field layout), 0 at d = 0.
std::vector<double> displacement_weights(const GridSpec& g, double beta, KernelDistance distance) {
  const double c = pv_constant(g.dim(), beta) * g.cell_volume();
  std::vector<double> w;
  if (distance == KernelDistance::periodized) {
    w = periodized_kernel(g, g.dim() + beta);
  } else {
    w.assign(static_cast<std::size_t>(g.size()), 0.0);
    for (Index d = 1; d < g.size(); ++d) w[std::size_t(d)] = std::pow(torus_distance(g, d, 0), -(g.dim() + beta));
  }
  for (double& v : w) v *= c;
  return w;
}

Index displacement(const GridSpec& g, Index from, Index to) {
  const int n = g.points();
  auto [x0, x1] = g.unravel(from);
  auto [y0, y1] = g.unravel(to);
  return g.ravel((y0 - x0 + n) % n, g.dim() == 2 ? (y1 - x1 + n) % n : 0);
}

}  // namespace

KernelMatrix build_kernel_matrix(const ComplexField& b, double beta, KernelDistance distance) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  if ((g.dim() == 1 && g.points() > 4096) || (g.dim() == 2 && g.points() > 48))
    throw std::invalid_argument("build_kernel_matrix: grid exceeds dense storage bound");
  const auto w = displacement_weights(g, beta, distance);
  const Index m = g.size();
  Eigen::MatrixXcd e(m, m);
  for (Index y = 0; y < m; ++y)
    for (Index x = 0; x < m; ++x) e(x, y) = (b[y] - b[x]) * w[std::size_t(displacement(g, x, y))];
  return {g, beta, b, std::move(e), distance};
}

ComplexField apply(const KernelMatrix& kernel, const ComplexField& f) {
  require_same_grid(kernel.grid, f.grid(), "apply(KernelMatrix)");
  return ComplexField(kernel.grid, kernel.entries * f.values());
}

ComplexField kernel_apply(const ComplexField& b, const ComplexField& f, double beta, KernelDistance distance) {
  require_beta(beta);
  require_same_grid(b.grid(), f.grid(), "kernel_apply");
  const GridSpec& g = b.grid();
  const Index m = g.size();
  const auto w = displacement_weights(g, beta, distance);
  ComplexField::Vector out(m);
  for (Index x = 0; x < m; ++x) {
    std::complex<double> acc = 0.0;
    for (Index y = 0; y < m; ++y) acc += w[std::size_t(displacement(g, x, y))] * (b[y] - b[x]) * f[y];
    out[x] = acc;
  }
  return ComplexField(g, std::move(out));
}

KernelBound estimate_A(const KernelMatrix& kernel) {
  const GridSpec& g = kernel.grid;
  KernelBound r;
  r.constant = pv_constant(g.dim(), kernel.beta);
  r.estimate = kernel.entries.cwiseAbs().rowwise().sum().maxCoeff();
  const auto& b = kernel.symbol_b;
  r.b_sup = b.sup_norm();
  const auto d1 = partial(b, 1);
  Eigen::ArrayXd grad2 = d1.values().cwiseAbs2().array();
  if (g.dim() == 2) grad2 += partial(b, 2).values().cwiseAbs2().array();
  r.grad_sup = std::sqrt(grad2.maxCoeff());
  const double sphere = g.dim() == 1 ? 2.0 : 2.0 * std::numbers::pi;
  r.bound = r.constant * sphere * (r.grad_sup / (1.0 - kernel.beta) + 2.0 * r.b_sup / kernel.beta);
  return r;
}

namespace {

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TailCurve tail_decay_probe(const ComplexField& b, double beta, double p, const std::vector<ComplexField>& probes,
                           const std::vector<double>& radii) {
  require_beta(beta);
  const GridSpec& g = b.grid();
  const int n = g.dim();
  if (!(p > 1.0 && p < n / beta)) throw std::invalid_argument("tail_decay_probe: need 1 < p < n/beta");
  for (double r : radii)
    if (!(r > 0.0 && r <= 0.5 * g.half_width())) throw std::invalid_argument("tail_decay_probe: radius outside (0, L/2]");
  const double q = n * p / (n - beta * p);

  TailCurve curve;
  curve.radii = radii;
  curve.norms.assign(radii.size(), 0.0);
  curve.envelope.assign(radii.size(), 0.0);
  for (const auto& probe : probes) {
    const double scale = lp_norm(probe, q);
    if (scale == 0.0) continue;
    const auto out = kernel_apply(b, std::complex<double>(1.0 / scale) * probe, beta, KernelDistance::minimum_image);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      ComplexField::Vector masked = out.values();
      double env = 0.0;
      for (Index i = 0; i < masked.size(); ++i) {
        const auto pt = g.point(i);
        if (std::hypot(pt[0], pt[1]) <= radii[k]) masked[i] = 0.0;
        else env = std::max(env, std::abs(masked[i]));
      }
      curve.norms[k] = std::max(curve.norms[k], lp_norm(ComplexField(g, std::move(masked)), p));
      curve.envelope[k] = std::max(curve.envelope[k], env);
    }
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < radii.size(); ++k)
    if (curve.envelope[k] > 0.0) {
      lx.push_back(std::log(radii[k]));
      ly.push_back(std::log(curve.envelope[k]));
    }
  curve.envelope_slope = lx.size() >= 2 ? slope_fit(lx, ly) : 0.0;
  return curve;
}

TranslateCurve translate_modulus(const KernelMatrix& kernel, const std::vector<int>& shifts) {
  const GridSpec& g = kernel.grid;
  const int n = g.points();
  const Index m = g.size();
  TranslateCurve curve;
  for (int s : shifts) {
    // Row permutation x -> x + h along the first axis.
    std::vector<Index> src(static_cast<std::size_t>(m));
    for (Index x = 0; x < m; ++x) {
      auto [x0, x1] = g.unravel(x);
      src[std::size_t(x)] = g.ravel(((x0 + s) % n + n) % n, x1);
    }
    double worst = 0.0;
    for (Index y = 0; y < m; ++y) {
      double acc = 0.0;
      for (Index x = 0; x < m; ++x) acc += std::abs(kernel.entries(src[std::size_t(x)], y) - kernel.entries(x, y));
      worst = std::max(worst, acc);
    }
    curve.shifts.push_back(std::abs(s) * g.spacing());
    curve.values.push_back(worst);
  }

  // Nonnegative least squares in two unknowns: try the unconstrained
  // solution, then each single-term fit, keep the best feasible one.
  const double e = 1.0 - kernel.beta;
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < curve.shifts.size(); ++i)
    if (curve.shifts[i] > 0.0) use.push_back(i);
  if (use.empty()) return curve;
  Eigen::MatrixXd a(Index(use.size()), 2);
  Eigen::VectorXd rhs(Index(use.size()));
  for (std::size_t r = 0; r < use.size(); ++r) {
    const double h = curve.shifts[use[r]];
    // Relative weighting: every point counts equally in log scale.
    const double w = 1.0 / curve.values[use[r]];
    a(Index(r), 0) = w * std::pow(h, e);
    a(Index(r), 1) = w * h;
    rhs[Index(r)] = 1.0;
  }
  std::vector<Eigen::Vector2d> candidates;
  const Eigen::Vector2d full = a.colPivHouseholderQr().solve(rhs);
  if (full[0] >= 0.0 && full[1] >= 0.0) candidates.push_back(full);
  for (int col = 0; col < 2; ++col) {
    const double c = a.col(col).dot(rhs) / a.col(col).squaredNorm();
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    v[col] = std::max(c, 0.0);
    candidates.push_back(v);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : candidates) {
    const double res = (a * v - rhs).squaredNorm();
    if (res < best) {
      best = res;
      curve.c_fractional = v[0];
      curve.c_linear = v[1];
    }
  }
  for (std::size_t i : use) {
    const double h = curve.shifts[i];
    const double model = curve.c_fractional * std::pow(h, e) + curve.c_linear * h;
    curve.max_relative_misfit = std::max(curve.max_relative_misfit, std::abs(model - curve.values[i]) / curve.values[i]);
  }
  return curve;
}

double kpv_ratio(const ComplexField& b, const ComplexField& f, double beta, double p) {
  require_beta(beta);
  const int n = b.grid().dim();
  if (!(p > 1.0 && p < n / beta)) throw std::invalid_argument("kpv_ratio: need 1 < p < n/beta");
  const double num = lp_norm(commutator_apply(b, f, beta), p);
  const double den = lp_norm(frac_laplacian(b, beta), n / beta) * lp_norm(f, n * p / (n - beta * p));
  // Constants are annihilated only up to rounding.
  const double scale = b.sup_norm() * f.sup_norm();
  if (den <= 1e-13 * std::max(scale, 1e-300) || den == 0.0) {
    if (num <= 1e-12 * std::max(scale, 1e-300)) return 0.0;
    throw std::invalid_argument("kpv_ratio: degenerate denominator");
  }
  return num / den;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m, Index count) {
  Eigen::VectorXd sv;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m.real());
    sv = svd.singularValues();
  } else {
    // Eigen 3.4's complex BDCSVD can fault on matrices with many zero rows
    // (b * T with b an indicator). The Gram eigenvalues resolve sigma down to
    // about 1e-8 sigma_1, which is all eps_rank needs.
    const Eigen::MatrixXcd gram = m.rows() >= m.cols() ? Eigen::MatrixXcd(m.adjoint() * m)
                                                       : Eigen::MatrixXcd(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    sv = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  }
  return sv.head(std::min(count, sv.size()));
}

Eigen::VectorXd compactness_spectrum(const KernelMatrix& kernel, Index count) {
  return singular_values(kernel.entries, count);
}

Index eps_rank(const Eigen::VectorXd& sv, double eps) {
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  Index k = 0;
  while (k < sv.size() && sv[k] / sv[0] >= eps) ++k;
  return k;
}

Eigen::MatrixXcd comparison_operator_matrix(const ComplexField& b) {
  const GridSpec& g = b.grid();
  if ((g.dim() == 1 && g.points() > 4096) || (g.dim() == 2 && g.points() > 48))
    throw std::invalid_argument("comparison_operator_matrix: grid exceeds dense storage bound");
  const Index m = g.size();
  Eigen::MatrixXcd out(m, m);
  for (Index j = 0; j < m; ++j) {
    ComplexField::Vector e = ComplexField::Vector::Zero(m);
    e[j] = 1.0;
    const ComplexField unit(g, std::move(e));
    const auto t = g.dim() == 2 ? beurling(unit) : riesz_transform(unit, 1);
    out.col(j) = b.values().cwiseProduct(t.values());
  }
  return out;
}

}  // namespace fraclab
