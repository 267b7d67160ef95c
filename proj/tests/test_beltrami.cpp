#include "fraclab/beltrami.hpp"
#include "fraclab/families.hpp"
#include "fraclab/multipliers.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraclab;

namespace {

const std::complex<double> one(1.0, 0.0);

// Relative L2 distance restricted to inner <= |z| <= outer.
double annulus_rel(const ComplexField& a, const ComplexField& b, double inner, double outer) {
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const auto p = a.grid().point(i);
    const double r = std::hypot(p[0], p[1]);
    if (r >= inner && r <= outer) {
      num += std::norm(a[i] - b[i]);
      den += std::norm(b[i]);
    }
  }
  return std::sqrt(num / den);
}

ComplexField disk_exterior_dphi(const GridSpec& g, double k) {
  return ComplexField::sample(g, [k](std::complex<double> z) {
    return std::abs(z) > 0.5 ? 1.0 - k / (z * z) : std::complex<double>(1.0);
  });
}

}  // namespace

TEST_CASE("BeltramiCoefficient validation") {
  const GridSpec g(2, 64, 4.0);
  CHECK_THROWS_AS(BeltramiCoefficient::make(families::smooth_bump(g, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(BeltramiCoefficient::make(families::smooth_bump(g, 0.5, 1.5)), std::invalid_argument);
  CHECK_THROWS_AS(BeltramiCoefficient::make(testing::gaussian(g, 0.3)), std::invalid_argument);
  CHECK_THROWS_AS(BeltramiCoefficient::make(ComplexField(GridSpec(1, 64, 4.0))), std::invalid_argument);
  const auto mu = BeltramiCoefficient::make(families::smooth_bump(g, 0.6));
  CHECK(mu.sup_bound() == doctest::Approx(0.6));
  CHECK(mu.support_radius() < 1.0);
  const auto nu = BeltramiCoefficient::make(families::smooth_bump(g, 0.5));
  CHECK_THROWS_AS(pair_bound(mu, nu), std::invalid_argument);
  CHECK(pair_bound(mu, BeltramiCoefficient::make(families::smooth_bump(g, 0.3))) == doctest::Approx(0.9));
}

TEST_CASE("apply_beltrami_operator") {
  const GridSpec g(2, 64, 4.0);
  const auto zero = BeltramiCoefficient::zero(g);
  const auto h = testing::random_field(g, 1);
  CHECK(testing::max_abs_diff(apply_beltrami_operator(zero, zero, h), h) == 0.0);

  // L2 operator norm <= 1 + sup(|mu| + |nu|) on a probe census.
  const auto mu = BeltramiCoefficient::make(families::smooth_bump(g, 0.4));
  const auto nu = BeltramiCoefficient::make(families::random_bandlimited(g, 0.3, 3));
  const double k = pair_bound(mu, nu);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = testing::random_field(g, 100 + s);
    CHECK(lp_norm(apply_beltrami_operator(mu, nu, f), 2.0) <= (1.0 + k) * lp_norm(f, 2.0));
  }

  // B(chi_D) = 0 on D: (Id - k chi B)(k chi) = k chi there.
  const double kk = 0.5;
  std::vector<double> err;
  for (int n : {128, 512}) {
    const GridSpec gn(2, n, 4.0);
    const auto chi = ComplexField::sample(gn, [kk](std::complex<double> z) { return std::abs(z) < 1.0 ? kk : 0.0; });
    const auto m = BeltramiCoefficient::make(chi);
    const auto out = apply_beltrami_operator(m, BeltramiCoefficient::zero(gn), chi);
    double e = 0.0;
    for (Index i = 0; i < out.size(); ++i) {
      const auto p = gn.point(i);
      if (std::hypot(p[0], p[1]) <= 0.8) e = std::max(e, std::abs(out[i] - chi[i]));
    }
    err.push_back(e);
  }
  MESSAGE("interior sup error " << err[0] << " -> " << err[1]);
  CHECK(err[1] < err[0]);
}

TEST_CASE("solve_integral_equation: trivial coefficient") {
  const GridSpec g(2, 64, 4.0);
  const auto zero = BeltramiCoefficient::zero(g);
  const auto rhs = testing::random_field(g, 2);
  const auto s = solve_integral_equation(zero, zero, rhs);
  CHECK(s.report.iterations == 1);
  CHECK(s.report.converged);
  CHECK(testing::max_abs_diff(s.h, rhs) == 0.0);
  const auto empty = solve_integral_equation(zero, zero, ComplexField(g));
  CHECK(empty.report.converged);
  CHECK(empty.h.sup_norm() == 0.0);
}

TEST_CASE("Neumann residuals obey the geometric bound") {
  // The mollified unit disk reaches radius 1 + eps, so L = 4.5 keeps it inside L/4.
  const GridSpec g(2, 128, 4.5);
  for (double k : {0.3, 0.5, 0.7}) {
    const auto mu = BeltramiCoefficient::make(families::mollified_disk(g, k, 0.1));
    const auto s = solve_integral_equation(mu, BeltramiCoefficient::zero(g), mu.field());
    REQUIRE(s.report.method == "neumann");
    CHECK(s.report.converged);
    CHECK(s.report.final_residual <= 1e-10);
    for (std::size_t m = 0; m < s.report.residual_curve.size(); ++m) {
      CHECK(s.report.residual_curve[m] <= std::pow(k, double(m + 1)) * (1 + 1e-9));
      if (m > 0) CHECK(s.report.residual_curve[m] < s.report.residual_curve[m - 1]);
    }
    CHECK(s.report.contraction_estimate <= k + 0.05);
  }
}

TEST_CASE("Krylov path for strong coefficients, with and without nu") {
  const GridSpec g(2, 64, 4.0);
  const auto mu = BeltramiCoefficient::make(families::smooth_bump(g, 0.6, 0.9));
  const auto nu = BeltramiCoefficient::make(families::random_bandlimited(g, 0.3, 5, 0.9));
  const auto rhs = families::smooth_bump(g, 1.0, 0.7, {0.1, -0.2});
  const auto s = solve_integral_equation(mu, nu, rhs);
  CHECK(s.report.method == "gmres");
  CHECK(s.report.converged);
  CHECK(relative_l2(apply_beltrami_operator(mu, nu, s.h), rhs) <= 1e-10);
  // Same answer from the Neumann path when it is forced.
  SolveOptions neumann_only;
  neumann_only.krylov_threshold = 1.0;
  neumann_only.max_iter = 1000;
  const auto t = solve_integral_equation(mu, nu, rhs, neumann_only);
  CHECK(t.report.method == "neumann");
  CHECK(relative_l2(t.h, s.h) < 1e-8);
  // Budget exhaustion is reported, not thrown.
  SolveOptions tiny;
  tiny.max_iter = 2;
  const auto u = solve_integral_equation(mu, nu, rhs, tiny);
  CHECK_FALSE(u.report.converged);
  CHECK(u.report.final_residual > 1e-10);
}

TEST_CASE("principal_solution") {
  const GridSpec g(2, 128, 4.0);
  const auto zero = principal_solution(BeltramiCoefficient::zero(g));
  CHECK(zero.phi_displacement.sup_norm() == 0.0);
  CHECK(testing::max_abs_diff(zero.dphi, ComplexField::constant(g, 1.0)) == 0.0);
  CHECK(zero.dbarphi.sup_norm() == 0.0);

  const auto mu = BeltramiCoefficient::make(families::random_bandlimited(g, 0.5, 9));
  const auto s = principal_solution(mu);
  CHECK(s.report.converged);
  CHECK(s.beltrami_residual <= 10 * 1e-10);
  // d phi recovered from the displacement by differentiation.
  CHECK(relative_l2(dz(s.phi_displacement) + one, s.dphi) < 1e-12);
}

TEST_CASE("principal_solution for the mollified disk") {
  const double k = 0.5;
  std::vector<double> inside, outside;
  for (int n : {128, 256}) {
    const GridSpec g(2, n, 4.5);
    const auto mu = BeltramiCoefficient::make(families::mollified_disk(g, k, 0.125));
    const auto s = principal_solution(mu);
    inside.push_back(annulus_rel(s.dphi, ComplexField::constant(g, 1.0), 0.0, 0.8));
    outside.push_back(annulus_rel(s.dphi, disk_exterior_dphi(g, k), 1.25, 2.0));
  }
  MESSAGE("inside " << inside[0] << " " << inside[1] << " outside " << outside[0] << " " << outside[1]);
  CHECK(inside[1] < 0.02);
  CHECK(outside[1] < 0.02);
}

TEST_CASE("log_derivative") {
  const GridSpec g(2, 128, 4.0);
  const auto zero = log_derivative(BeltramiCoefficient::zero(g));
  CHECK(zero.g.sup_norm() == 0.0);
  CHECK(zero.consistency == 0.0);

  const auto mu = BeltramiCoefficient::make(families::smooth_bump(g, 0.4));
  const auto ld = log_derivative(mu);
  MESSAGE("consistency " << ld.consistency);
  CHECK(ld.consistent);
  CHECK(ld.consistency < 1e-3);

  // Mollified disk: exterior closed form log(1 - k/z^2).
  const double k = 0.5;
  const GridSpec fine(2, 256, 4.5);
  const auto disk = BeltramiCoefficient::make(families::mollified_disk(fine, k, 0.125));
  const auto ldd = log_derivative(disk);
  const auto expected = ComplexField::sample(fine, [k](std::complex<double> z) {
    return std::abs(z) > 0.5 ? std::log(1.0 - k / (z * z)) : std::complex<double>(0.0);
  });
  const double err = annulus_rel(ldd.g, expected, 1.25, 2.0);
  MESSAGE("exterior log error " << err);
  CHECK(err < 0.05);
}

TEST_CASE("T_mu: decomposition equals composition") {
  const GridSpec g(2, 64, 4.0);
  const auto f = testing::random_field(g, 7);
  const auto zero = BeltramiCoefficient::zero(g);
  CHECK(relative_l2(apply_T_mu(zero, 0.75, f), remove_mean(f)) < 1e-12);
  const auto mu = BeltramiCoefficient::make(families::random_bandlimited(g, 0.5, 11));
  for (double alpha : {0.6, 0.75, 0.9})
    CHECK(relative_l2(apply_T_mu(mu, alpha, f), apply_T_mu_composed(mu, alpha, f)) < 1e-10);
  CHECK_THROWS_AS(apply_T_mu(mu, 0.4, f), std::invalid_argument);
}

TEST_CASE("T_mu matrix is the identity for mu = 0") {
  const GridSpec g(2, 16, 4.5);
  const auto t = T_mu_matrix(BeltramiCoefficient::zero(g), 0.75);
  CHECK((t - Eigen::MatrixXcd::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(T_mu_min_singular_value(BeltramiCoefficient::zero(g), 0.75) == doctest::Approx(1.0));
  const auto mu = BeltramiCoefficient::make(families::mollified_disk(g, 0.5, 0.1));
  const double smin = T_mu_min_singular_value(mu, 0.75);
  CHECK(smin > 0.0);
  CHECK(smin <= 1.0);
}

TEST_CASE("apriori_check") {
  const GridSpec g(2, 128, 4.0);
  const auto mu = BeltramiCoefficient::make(families::smooth_bump(g, 0.5));
  const auto nu = BeltramiCoefficient::zero(g);
  const auto zero = apriori_check(mu, nu, 0.6, 2.0, ComplexField(g));
  CHECK(zero.ratio == 0.0);
  CHECK_THROWS_AS(apriori_check(mu, nu, 0.6, 3.5, ComplexField(g)), std::invalid_argument);
  const auto r = apriori_check(mu, nu, 0.6, 2.0, families::smooth_bump(g, 1.0, 0.8, {0.1, 0.1}));
  CHECK(r.ratio > 0.0);
  CHECK(std::isfinite(r.ratio));
  CHECK(r.solve.converged);
}
