#include "fraclab/families.hpp"
#include "fraclab/multipliers.hpp"
#include "fraclab/sobolev.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraclab;

TEST_CASE("homogeneous_seminorm") {
  const GridSpec g(2, 64, 2.0);
  CHECK(homogeneous_seminorm(ComplexField::constant(g, 2.0), 0.5, 2.0) < 1e-12);
  const auto mode = testing::lattice_mode(g, 3, 1);
  const double rate = 2.0 * std::numbers::pi * std::hypot(3.0, 1.0) / 4.0;
  CHECK(homogeneous_seminorm(mode, 0.3, 2.0) == doctest::Approx(std::pow(rate, 0.3) * lp_norm(mode, 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(homogeneous_seminorm(mode, 1.2, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(homogeneous_seminorm(mode, 0.5, 1.0), std::invalid_argument);

  // Parseval route.
  const auto f = testing::random_field(g, 3);
  const auto s = to_spectral(f);
  double acc = 0.0;
  for (Index i = 1; i < f.size(); ++i) {
    const auto xi = g.frequency_at(i);
    acc += std::pow(2.0 * std::numbers::pi * std::hypot(xi[0], xi[1]), 1.2) * std::norm(s.coefficients[i]);
  }
  CHECK(std::pow(homogeneous_seminorm(f, 0.6, 2.0), 2) == doctest::Approx(acc * g.cell_volume()).epsilon(1e-10));
}

TEST_CASE("homogeneous_seminorm of a smooth bump is stable under refinement") {
  std::vector<double> v;
  for (int n : {256, 512}) v.push_back(homogeneous_seminorm(families::smooth_bump(GridSpec(2, n, 4.0), 1.0), 0.5, 3.0));
  CHECK(v[1] == doctest::Approx(v[0]).epsilon(0.02));
}

TEST_CASE("gagliardo_seminorm") {
  const GridSpec g(2, 32, 2.0);
  CHECK(gagliardo_seminorm(ComplexField::constant(g, 1.0), 0.5, 2.0) < 1e-12);
  CHECK_THROWS_AS(gagliardo_seminorm(ComplexField(GridSpec(2, 128, 2.0)), 0.5, 2.0), std::invalid_argument);

  // p = 2: the ratio to the multiplier seminorm depends on (n, alpha) only.
  for (int dim : {1, 2}) {
    const GridSpec gd(dim, dim == 1 ? 1024 : 64, dim == 1 ? 4.0 : 2.0);
    const double alpha = 0.4;
    const std::vector<ComplexField> fields{
        families::smooth_bump(gd, 1.0, 1.0), families::smooth_bump(gd, 1.0, 0.6, {0.3, 0.0}),
        testing::gaussian(gd, 0.4), families::random_bandlimited(gd, 1.0, 7, 1.0, 2),
        families::random_bandlimited(gd, 1.0, 8, 0.8, 2)};
    const double expected = gagliardo_ratio_p2(dim, alpha);
    for (const auto& f : fields) {
      const double ratio = gagliardo_seminorm(f, alpha, 2.0) / homogeneous_seminorm(f, alpha, 2.0);
      MESSAGE("dim " << dim << " ratio " << ratio << " continuum " << expected);
      CHECK(ratio == doctest::Approx(expected).epsilon(0.03));
    }
  }
}

TEST_CASE("gagliardo_seminorm scaling under dilation") {
  // f(lambda x) scales the seminorm by lambda^{alpha - n/p}.
  const GridSpec g(1, 2048, 4.0);
  const double alpha = 0.5, p = 3.0, lambda = 2.0;
  const auto f = families::smooth_bump(g, 1.0, 1.0);
  const auto f_scaled = families::smooth_bump(g, 1.0, 1.0 / lambda);
  const double ratio = gagliardo_seminorm(f_scaled, alpha, p) / gagliardo_seminorm(f, alpha, p);
  CHECK(ratio == doctest::Approx(std::pow(lambda, alpha - 1.0 / p)).epsilon(0.01));
}

TEST_CASE("bmo_norm invariances and the logarithm") {
  const GridSpec g(2, 64, 2.0);
  const auto f = testing::random_field(g, 4);
  CHECK(bmo_norm(ComplexField::constant(g, 3.0)) == 0.0);
  CHECK(bmo_norm(f + std::complex<double>(4.0, -1.0)) == doctest::Approx(bmo_norm(f)).epsilon(1e-12));
  CHECK(bmo_norm(std::complex<double>(0.0, -2.5) * f) == doctest::Approx(2.5 * bmo_norm(f)).epsilon(1e-12));

  // log|z| windowed: BMO stays put while the sup norm grows.
  std::vector<double> bmo, sup;
  for (int n : {256, 512, 1024}) {
    const GridSpec gn(2, n, 4.0);
    const double h = 0.5 * gn.spacing();
    const auto log_abs = ComplexField::sample(gn, [h](std::complex<double> z) {
      const double r = std::abs(z - std::complex<double>(h, h));
      return std::log(r) * (1.0 - families::smooth_step((r - 1.0) / 1.0));
    });
    bmo.push_back(bmo_norm(log_abs));
    sup.push_back(log_abs.sup_norm());
  }
  MESSAGE("log|z| bmo " << bmo[0] << " " << bmo[1] << " " << bmo[2]);
  CHECK(sup[2] > sup[0] + 1.0);
  CHECK(bmo[2] == doctest::Approx(bmo[0]).epsilon(0.05));
}

TEST_CASE("vmo_modulus validation and monotonicity") {
  const GridSpec g(2, 128, 4.0);
  const auto f = testing::random_field(g, 2);
  CHECK_THROWS_AS(vmo_modulus(f, {3.0 * g.spacing()}), std::invalid_argument);
  CHECK_THROWS_AS(vmo_modulus(f, {4.0}), std::invalid_argument);
  const auto c = vmo_modulus(f, dyadic_scales(g, 2.0));
  CHECK(c.scales.size() == 5);
  for (std::size_t i = 1; i < c.modulus.size(); ++i) CHECK(c.modulus[i] >= c.modulus[i - 1]);
  const auto r = norm_report(families::smooth_bump(GridSpec(2, 64, 4.0), 0.5), 0.5, 2.0);
  CHECK(r.full >= r.homogeneous);
  CHECK(r.gagliardo.has_value());
  CHECK(r.bmo > 0.0);
}
