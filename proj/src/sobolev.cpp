#include "fraclab/sobolev.hpp"

#include "fraclab/multipliers.hpp"
#include "fraclab/pv_quadrature.hpp"

#include <algorithm>

namespace fraclab {

namespace {

void require_params(double alpha, double p, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(std::string(who) + ": alpha must lie in (0,1)");
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument(std::string(who) + ": p must lie in (1,inf)");
}

bool gagliardo_fits(const GridSpec& g) {
  return (g.dim() == 1 && g.points() <= 4096) || (g.dim() == 2 && g.points() <= 96);
}

}  // namespace

double homogeneous_seminorm(const ComplexField& f, double alpha, double p) {
  require_params(alpha, p, "homogeneous_seminorm");
  return lp_norm(frac_laplacian(f, alpha), p);
}

double gagliardo_seminorm(const ComplexField& f, double alpha, double p) {
  require_params(alpha, p, "gagliardo_seminorm");
  const GridSpec& g = f.grid();
  if (!gagliardo_fits(g)) throw std::invalid_argument("gagliardo_seminorm: grid exceeds dense bound");
  const auto kernel = periodized_kernel(g, g.dim() + alpha * p);
  const int n = g.points();
  const Index m = g.size();
  double total = 0.0;
  for (Index d = 1; d < m; ++d) {
    auto [d0, d1] = g.unravel(d);
    double acc = 0.0;
    for (Index x = 0; x < m; ++x) {
      auto [x0, x1] = g.unravel(x);
      const Index y = g.ravel((x0 + d0) % n, g.dim() == 2 ? (x1 + d1) % n : 0);
      const double diff = std::abs(f[x] - f[y]);
      acc += p == 2.0 ? diff * diff : std::pow(diff, p);
    }
    total += kernel[std::size_t(d)] * acc;
  }
  const double w = g.cell_volume();
  return std::pow(total * w * w, 1.0 / p);
}

double gagliardo_ratio_p2(int dim, double alpha) { return std::sqrt(2.0 / pv_constant(dim, 2.0 * alpha)); }

double dyadic_oscillation(const ComplexField& f, int side) {
  const GridSpec& g = f.grid();
  const int n = g.points();
  if (side < 1 || side > n || (side & (side - 1)) != 0)
    throw std::invalid_argument("dyadic_oscillation: side must be a power of two <= N");
  const int cells = n / side;
  const int cells1 = g.dim() == 2 ? cells : 1;
  const int side1 = g.dim() == 2 ? side : 1;
  double worst = 0.0;
  for (int c0 = 0; c0 < cells; ++c0)
    for (int c1 = 0; c1 < cells1; ++c1) {
      std::complex<double> mean = 0.0;
      for (int a = 0; a < side; ++a)
        for (int b = 0; b < side1; ++b) mean += f[g.ravel(c0 * side + a, c1 * side + b)];
      mean /= double(side) * side1;
      double osc = 0.0;
      for (int a = 0; a < side; ++a)
        for (int b = 0; b < side1; ++b) osc += std::abs(f[g.ravel(c0 * side + a, c1 * side + b)] - mean);
      worst = std::max(worst, osc / (double(side) * side1));
    }
  return worst;
}

double bmo_norm(const ComplexField& f) {
  double worst = 0.0;
  for (int side = 2; side <= f.grid().points(); side *= 2) worst = std::max(worst, dyadic_oscillation(f, side));
  return worst;
}

ModulusCurve vmo_modulus(const ComplexField& f, const std::vector<double>& scales) {
  const GridSpec& g = f.grid();
  std::vector<int> sides;
  for (double s : scales) {
    const double q = s / g.spacing();
    const int side = int(std::lround(q));
    if (std::abs(q - side) > 1e-9 * q || side < 1 || (side & (side - 1)) != 0)
      throw std::invalid_argument("vmo_modulus: scale is not a dyadic multiple of the spacing");
    if (s > 0.5 * g.half_width() * (1 + 1e-12)) throw std::invalid_argument("vmo_modulus: scale exceeds L/2");
    sides.push_back(side);
  }
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  ModulusCurve curve;
  double running = 0.0;
  for (int side : sides) {
    const double osc = dyadic_oscillation(f, side);
    running = std::max(running, osc);
    curve.scales.push_back(side * g.spacing());
    curve.per_scale.push_back(osc);
    curve.modulus.push_back(running);
  }
  return curve;
}

std::vector<double> dyadic_scales(const GridSpec& grid, double largest) {
  std::vector<double> out;
  for (int side = 2; side * grid.spacing() <= largest * (1 + 1e-12) && side <= grid.points(); side *= 2)
    out.push_back(side * grid.spacing());
  return out;
}

NormReport norm_report(const ComplexField& f, double alpha, double p) {
  NormReport r;
  r.lp = lp_norm(f, p);
  r.homogeneous = homogeneous_seminorm(f, alpha, p);
  r.full = r.lp + r.homogeneous;
  if (gagliardo_fits(f.grid())) r.gagliardo = gagliardo_seminorm(f, alpha, p);
  r.bmo = bmo_norm(f);
  r.vmo = vmo_modulus(f, dyadic_scales(f.grid(), 0.5 * f.grid().half_width()));
  return r;
}

}  // namespace fraclab
