#include "fraclab/commutator.hpp"
#include "fraclab/families.hpp"
#include "fraclab/multipliers.hpp"
#include "fraclab/pv_quadrature.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraclab;

namespace {

ComplexField smooth_pair_f(const GridSpec& g) {
  return ComplexField::sample(g, [](double x) { return std::exp(-x * x / 0.18) * std::complex<double>(1.0 + 0.5 * x, 0.3); });
}

}  // namespace

TEST_CASE("commutator_apply with constant inputs") {
  const GridSpec g(1, 256, 4.0);
  const auto b = families::smooth_bump(g, 1.0, 0.8);
  const auto f = testing::random_field(g, 2);
  CHECK(commutator_apply(ComplexField::constant(g, 2.0), f, 0.4).sup_norm() < 1e-11);
  const std::complex<double> c(0.7, -0.2);
  const auto lhs = commutator_apply(b, ComplexField::constant(g, c), 0.4);
  CHECK(relative_l2(lhs, -c * frac_laplacian(b, 0.4)) < 1e-12);
}

TEST_CASE("build_kernel_matrix: hand-computed entries and size bounds") {
  const GridSpec g(1, 8, 1.0);
  const auto b = ComplexField::sample(g, [](double x) { return x * x; });
  const auto k = build_kernel_matrix(b, 0.5);
  CHECK(k.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
  // x = sample 1, y = sample 6: minimum-image distance 3 cells of 0.25.
  const double expected = pv_constant(1, 0.5) * (b[6].real() - b[1].real()) / std::pow(0.75, 1.5) * 0.25;
  const auto nearest = build_kernel_matrix(b, 0.5, KernelDistance::minimum_image);
  CHECK(nearest.entries(1, 6).real() == doctest::Approx(expected).epsilon(1e-14));
  // The periodized kernel adds the images at distances 2 - 0.75, 2 + 0.75, ...
  CHECK(k.entries(1, 6).real() / expected - 1.0 > std::pow(0.75 / 1.25, 1.5));
  CHECK(build_kernel_matrix(ComplexField(g), 0.5).entries.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_kernel_matrix(ComplexField(GridSpec(1, 8192, 1.0)), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel_matrix(ComplexField(GridSpec(2, 64, 1.0)), 0.5), std::invalid_argument);
  // Numerator antisymmetry.
  CHECK(std::abs(k.entries(2, 5) + k.entries(5, 2)) < 1e-14);
}

TEST_CASE("kernel quadrature converges to the spectral commutator") {
  double previous = 1.0;
  for (int n : {256, 1024}) {
    const GridSpec g(1, n, 4.0);
    const auto b = families::smooth_bump(g, 1.0, 1.0);
    const auto f = smooth_pair_f(g);
    const auto spectral = commutator_apply(b, f, 0.5);
    const auto k = build_kernel_matrix(b, 0.5);
    const double err = relative_l2(apply(k, f), spectral);
    MESSAGE("N=" << n << " kernel vs spectral " << err);
    CHECK(err < previous);
    previous = err;
    CHECK(relative_l2(kernel_apply(b, f, 0.5), apply(k, f)) < 1e-12);
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("minimum-image kernel differs from the torus operator by the periodic images") {
  // In 1D the images decay like L^{-1-beta}; the L2 discrepancy is large at
  // L = 4 and shrinks as the half width grows.
  std::vector<double> errs;
  for (double half_width : {4.0, 16.0}) {
    const GridSpec g(1, int(256 * half_width), half_width);
    const auto b = families::smooth_bump(g, 1.0, 1.0);
    const auto f = smooth_pair_f(g);
    errs.push_back(relative_l2(kernel_apply(b, f, 0.5, KernelDistance::minimum_image), commutator_apply(b, f, 0.5)));
  }
  MESSAGE("minimum-image discrepancy " << errs[0] << " " << errs[1]);
  CHECK(errs[1] < 0.5 * errs[0]);
}

TEST_CASE("estimate_A") {
  const GridSpec g(1, 512, 4.0);
  CHECK(estimate_A(build_kernel_matrix(ComplexField(g), 0.3)).estimate == 0.0);
  CHECK(estimate_A(build_kernel_matrix(ComplexField::constant(g, 1.0), 0.3)).estimate == 0.0);
  const auto a = estimate_A(build_kernel_matrix(families::smooth_bump(g, 1.0, 0.5), 0.3));
  MESSAGE("A estimate " << a.estimate << " bound " << a.bound);
  CHECK(a.estimate > 0.0);
  CHECK(a.estimate <= a.bound);
}

TEST_CASE("tail_decay_probe") {
  const GridSpec g(1, 1024, 4.0);
  const std::vector<double> radii{0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  const std::vector<ComplexField> probes{families::smooth_bump(g, 1.0, 0.5), testing::gaussian(g, 0.3, 0.1)};
  const auto zero = tail_decay_probe(ComplexField(g), 0.5, 1.5, probes, radii);
  for (double v : zero.norms) CHECK(v == 0.0);
  const auto b = families::smooth_bump(g, 1.0, 0.25);
  const auto curve = tail_decay_probe(b, 0.5, 1.5, probes, radii);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    CHECK(curve.norms[i] <= curve.norms[i - 1]);
    CHECK(curve.envelope[i] <= curve.envelope[i - 1]);
  }
  MESSAGE("envelope slope " << curve.envelope_slope);
  CHECK(curve.envelope_slope == doctest::Approx(-1.5).epsilon(0.1));
  CHECK_THROWS_AS(tail_decay_probe(b, 0.5, 1.5, probes, {2.5}), std::invalid_argument);
}

TEST_CASE("translate_modulus") {
  const GridSpec g(1, 512, 4.0);
  const auto k = build_kernel_matrix(families::smooth_bump(g, 1.0, 0.5), 0.5);
  const double a = estimate_A(k).estimate;
  const auto curve = translate_modulus(k, {0, 1, 2, 4, 8, 16, 32});
  CHECK(curve.values[0] == 0.0);
  for (double v : curve.values) CHECK(v <= 2.0 * a * (1 + 1e-12));
  for (std::size_t i = 2; i < curve.values.size(); ++i) CHECK(curve.values[i] >= curve.values[i - 1]);
  MESSAGE("c1 " << curve.c_fractional << " c2 " << curve.c_linear << " misfit " << curve.max_relative_misfit);
  CHECK(curve.c_fractional >= 0.0);
  CHECK(curve.c_linear >= 0.0);
  CHECK(curve.c_fractional + curve.c_linear > 0.0);
}

TEST_CASE("kpv_ratio invariances") {
  const GridSpec g(2, 64, 4.0);
  const auto b = families::random_bandlimited(g, 1.0, 4, 0.8);
  const auto f = families::random_bandlimited(g, 1.0, 5, 0.8);
  CHECK(kpv_ratio(ComplexField::constant(g, 3.0), f, 0.4, 1.5) == 0.0);
  const double r = kpv_ratio(b, f, 0.4, 1.5);
  CHECK(r > 0.0);
  CHECK(kpv_ratio(b, std::complex<double>(-3.0, 2.0) * f, 0.4, 1.5) == doctest::Approx(r).epsilon(1e-10));
  CHECK(kpv_ratio(b + std::complex<double>(5.0, 1.0), f, 0.4, 1.5) == doctest::Approx(r).epsilon(1e-8));
  CHECK_THROWS_AS(kpv_ratio(b, f, 0.4, 5.5), std::invalid_argument);
}

TEST_CASE("compactness_spectrum and the comparison operator") {
  const GridSpec g(1, 128, 4.0);
  const auto zero = compactness_spectrum(build_kernel_matrix(ComplexField(g), 0.3), 10);
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
  CHECK(eps_rank(zero, 1e-2) == 0);
  Eigen::VectorXd sv(4);
  sv << 2.0, 1.0, 0.03, 0.01;
  CHECK(eps_rank(sv, 1e-2) == 3);
  CHECK(eps_rank(sv, 0.6) == 1);

  std::vector<Index> ranks;
  for (int n : {256, 512, 1024}) {
    const GridSpec gn(1, n, 4.0);
    const auto chi = ComplexField::sample(gn, [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
    ranks.push_back(eps_rank(singular_values(comparison_operator_matrix(chi), n), 1e-2));
  }
  MESSAGE("comparison ranks " << ranks[0] << " " << ranks[1] << " " << ranks[2]);
  CHECK(ranks[1] > ranks[0]);
  CHECK(ranks[2] > ranks[1]);
}
