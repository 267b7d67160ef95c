#include "fraclab/beltrami.hpp"

#include "fraclab/commutator.hpp"
#include "fraclab/multipliers.hpp"

#include <algorithm>

namespace fraclab {

BeltramiCoefficient BeltramiCoefficient::make(const ComplexField& field) {
  detail::require_planar(field.grid(), "BeltramiCoefficient");
  const double k = field.sup_norm();
  if (!(k < 1.0)) throw std::invalid_argument("BeltramiCoefficient: sup norm must be < 1");
  double r = 0.0;
  for (Index i = 0; i < field.size(); ++i)
    if (std::abs(field[i]) > 1e-12) {
      const auto p = field.grid().point(i);
      r = std::max(r, std::hypot(p[0], p[1]));
    }
  if (r > 0.25 * field.grid().half_width() * (1 + 1e-12))
    throw std::invalid_argument("BeltramiCoefficient: support radius exceeds L/4");
  return BeltramiCoefficient(field, k, r);
}

BeltramiCoefficient BeltramiCoefficient::zero(const GridSpec& grid) { return make(ComplexField(grid)); }

double pair_bound(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu) {
  require_same_grid(mu.grid(), nu.grid(), "pair_bound");
  const double k = (mu.field().values().cwiseAbs() + nu.field().values().cwiseAbs()).maxCoeff();
  if (!(k < 1.0)) throw std::invalid_argument("pair_bound: sup(|mu| + |nu|) must be < 1");
  return k;
}

ComplexField apply_beltrami_operator(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu,
                                     const ComplexField& h) {
  require_same_grid(mu.grid(), h.grid(), "apply_beltrami_operator");
  require_same_grid(nu.grid(), h.grid(), "apply_beltrami_operator");
  const auto bh = beurling(h);
  return h - mu.field() * bh - nu.field() * bh.conj();
}

namespace {

// mu B h + nu conj(B h)
ComplexField perturbation(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu, const ComplexField& h) {
  const auto bh = beurling(h);
  return mu.field() * bh + nu.field() * bh.conj();
}

void finish_report(SolveReport& r) {
  const auto& c = r.residual_curve;
  if (c.size() >= 2 && c.front() > 0.0 && c.back() > 0.0)
    r.contraction_estimate = std::pow(c.back() / c.front(), 1.0 / double(c.size() - 1));
}

IntegralSolution neumann(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu, const ComplexField& g,
                         const SolveOptions& opt, double g_norm) {
  SolveReport report;
  report.method = "neumann";
  ComplexField h(g.grid());
  ComplexField mh(g.grid());  // M h for the current iterate
  for (int m = 1; m <= opt.max_iter; ++m) {
    ComplexField next = g + mh;
    ComplexField m_next = perturbation(mu, nu, next);
    // A next - g = next - M next - g = M h - M next.
    const double res = (mh.values() - m_next.values()).norm() / g_norm;
    h = std::move(next);
    mh = std::move(m_next);
    report.residual_curve.push_back(res);
    report.iterations = m;
    if (res <= opt.tol) {
      report.converged = true;
      break;
    }
  }
  return {std::move(h), std::move(report)};
}

using RealVector = Eigen::VectorXd;

RealVector pack(const ComplexField& f) {
  RealVector v(2 * f.size());
  v.head(f.size()) = f.values().real();
  v.tail(f.size()) = f.values().imag();
  return v;
}

ComplexField unpack(const GridSpec& g, const RealVector& v) {
  const Index m = g.size();
  ComplexField::Vector c(m);
  c.real() = v.head(m);
  c.imag() = v.tail(m);
  return ComplexField(g, std::move(c));
}

IntegralSolution gmres(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu, const ComplexField& g,
                       const SolveOptions& opt, double g_norm) {
  SolveReport report;
  report.method = "gmres";
  const GridSpec& grid = g.grid();
  auto op = [&](const RealVector& x) { return pack(apply_beltrami_operator(mu, nu, unpack(grid, x))); };
  const RealVector b = pack(g);
  RealVector x = RealVector::Zero(b.size());
  const int restart = std::max(1, opt.restart);
  int total = 0;
  while (total < opt.max_iter) {
    RealVector r = b - op(x);
    double beta = r.norm();
    if (beta / g_norm <= opt.tol) {
      report.converged = true;
      break;
    }
    const int m = std::min(restart, opt.max_iter - total);
    std::vector<RealVector> basis{r / beta};
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m), sn = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[0] = beta;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      RealVector w = op(basis[j]);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = w.dot(basis[i]);
        w -= hess(i, j) * basis[i];
      }
      hess(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double denom = std::hypot(hess(j, j), hess(j + 1, j));
      cs[j] = hess(j, j) / denom;
      sn[j] = hess(j + 1, j) / denom;
      const double sub = hess(j + 1, j);
      hess(j, j) = cs[j] * hess(j, j) + sn[j] * sub;
      hess(j + 1, j) = 0.0;
      rhs[j + 1] = -sn[j] * rhs[j];
      rhs[j] = cs[j] * rhs[j];
      used = j + 1;
      ++total;
      report.residual_curve.push_back(std::abs(rhs[j + 1]) / g_norm);
      if (std::abs(rhs[j + 1]) / g_norm <= opt.tol || sub == 0.0) break;
      basis.push_back(w / sub);
    }
    const Eigen::VectorXd y =
        hess.topLeftCorner(used, used).triangularView<Eigen::Upper>().solve(rhs.head(used));
    for (int i = 0; i < used; ++i) x += y[i] * basis[i];
    report.iterations = total;
  }
  ComplexField h = unpack(grid, x);
  const double res = (apply_beltrami_operator(mu, nu, h).values() - g.values()).norm() / g_norm;
  report.converged = res <= opt.tol;
  return {std::move(h), std::move(report)};
}

}  // namespace

IntegralSolution solve_integral_equation(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu,
                                         const ComplexField& g, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_integral_equation: tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("solve_integral_equation: max_iter must be >= 1");
  require_same_grid(mu.grid(), g.grid(), "solve_integral_equation");
  const double k = pair_bound(mu, nu);
  const double g_norm = g.values().norm();
  if (g_norm == 0.0) {
    SolveReport r;
    r.method = "trivial";
    r.converged = true;
    return {ComplexField(g.grid()), r};
  }
  IntegralSolution s = k > options.krylov_threshold ? gmres(mu, nu, g, options, g_norm) : neumann(mu, nu, g, options, g_norm);
  finish_report(s.report);
  s.report.final_residual = (apply_beltrami_operator(mu, nu, s.h).values() - g.values()).norm() / g_norm;
  s.report.converged = s.report.final_residual <= options.tol;
  return s;
}

PrincipalSolution principal_solution(const BeltramiCoefficient& mu, const SolveOptions& options) {
  const auto nu = BeltramiCoefficient::zero(mu.grid());
  auto sol = solve_integral_equation(mu, nu, mu.field(), options);
  PrincipalSolution out{cauchy_transform(sol.h), beurling(sol.h) + std::complex<double>(1.0), sol.h,
                        std::move(sol.report)};
  out.beltrami_residual = (out.dbarphi - mu.field() * out.dphi).values().norm() / out.dphi.values().norm();
  return out;
}

LogDerivative log_derivative(const BeltramiCoefficient& mu, const SolveOptions& options) {
  const auto nu = BeltramiCoefficient::zero(mu.grid());
  auto sol = solve_integral_equation(mu, nu, dz(mu.field()), options);
  LogDerivative out{cauchy_transform(sol.h), sol.h, std::move(sol.report)};
  const auto principal = principal_solution(mu, options);
  out.consistency = relative_l2(out.g.map([](std::complex<double> v) { return std::exp(v); }), principal.dphi);
  out.consistent = out.consistency <= 1e-2;
  return out;
}

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw std::invalid_argument("T_mu: alpha must lie in (1/2, 1)");
}

}  // namespace

ComplexField apply_T_mu(const BeltramiCoefficient& mu, double alpha, const ComplexField& f) {
  require_alpha(alpha);
  const auto bf = beurling(f);
  const double order = 1.0 - alpha;
  return remove_mean(f - mu.field() * bf) - riesz_potential(commutator_apply(mu.field(), bf, order), order);
}

ComplexField apply_T_mu_composed(const BeltramiCoefficient& mu, double alpha, const ComplexField& f) {
  require_alpha(alpha);
  const double order = 1.0 - alpha;
  const auto u = frac_laplacian(f, order);
  return riesz_potential(u - mu.field() * beurling(u), order);
}

Eigen::MatrixXcd T_mu_matrix(const BeltramiCoefficient& mu, double alpha) {
  const GridSpec& g = mu.grid();
  if (g.points() > 32) throw std::invalid_argument("T_mu_matrix: dense bound is N <= 32");
  const Index m = g.size();
  Eigen::MatrixXcd t(m - 1, m - 1);
  for (Index j = 1; j < m; ++j) {
    SpectralField<double> unit{g, SpectralField<double>::Vector::Zero(m)};
    unit.coefficients[j] = 1.0;
    const auto col = to_spectral(apply_T_mu(mu, alpha, to_physical(unit)));
    t.col(j - 1) = col.coefficients.tail(m - 1);
  }
  return t;
}

double T_mu_min_singular_value(const BeltramiCoefficient& mu, double alpha) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T_mu_matrix(mu, alpha));
  return svd.singularValues().minCoeff();
}

double sobolev_norm(const ComplexField& u, double alpha, double p) {
  return lp_norm(u, p) + lp_norm(frac_laplacian(u, alpha), p);
}

AprioriReport apriori_check(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu, double alpha, double p,
                            const ComplexField& g, const SolveOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("apriori_check: alpha must lie in (0,1)");
  if (!(p > 1.0 && p < 2.0 / alpha)) throw std::invalid_argument("apriori_check: need 1 < p < 2/alpha");
  AprioriReport r;
  r.alpha = alpha;
  r.p = p;
  r.input_norm = sobolev_norm(g, alpha, p);
  auto sol = solve_integral_equation(mu, nu, g, options);
  r.solve = sol.report;
  if (r.input_norm == 0.0) return r;
  const auto df = beurling(sol.h);
  r.output_norm = sobolev_norm(df, alpha, p) + sobolev_norm(sol.h, alpha, p);
  r.ratio = r.output_norm / r.input_norm;
  return r;
}

}  // namespace fraclab
