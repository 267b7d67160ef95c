#include "fraclab/multipliers.hpp"
#include "fraclab/pv_quadrature.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraclab;

TEST_CASE("pv_constant matches the Cauchy kernel of D^1 in 1D") {
  // (-d^2/dx^2)^{1/2} has kernel 1/(pi |x|^2).
  CHECK(pv_constant(1, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(pv_constant(2, 0.5) > 0.0);
  CHECK_THROWS_AS(PVKernelParams::make(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PVKernelParams::make(3, 0.5), std::invalid_argument);
}

TEST_CASE("dirichlet_beta reference values") {
  CHECK(dirichlet_beta(1.0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(dirichlet_beta(2.0) == doctest::Approx(0.915965594177219015).epsilon(1e-14));  // Catalan
  CHECK(dirichlet_beta(0.125) == doctest::Approx(0.547141075324453).epsilon(1e-13));
  CHECK(dirichlet_beta(0.375) == doctest::Approx(0.630859202261192).epsilon(1e-13));
}

TEST_CASE("lattice_zeta matches a Gaussian-regularised lattice sum") {
  // sum' |m|^{-s} e^{-t|m|^2} - int |x|^{-s} e^{-t|x|^2} dx = Z(s) + O(t);
  // two values of t and Richardson extrapolation remove the O(t) term.
  for (int dim : {1, 2}) {
    for (double beta : {0.25, 0.75}) {
      const double s = dim + beta - 2.0;
      auto regularised = [&](double t) {
        const int cut = int(std::sqrt(40.0 / t)) + 1;
        double sum = 0.0;
        for (int a = -cut; a <= cut; ++a)
          for (int b = (dim == 2 ? -cut : 0); b <= (dim == 2 ? cut : 0); ++b) {
            const double r2 = double(a) * a + double(b) * b;
            if (r2 > 0) sum += std::pow(r2, -0.5 * s) * std::exp(-t * r2);
          }
        const double integral = dim == 1 ? std::tgamma(0.5 * (1.0 - s)) * std::pow(t, 0.5 * (s - 1.0))
                                         : std::numbers::pi * std::tgamma(1.0 - 0.5 * s) * std::pow(t, 0.5 * s - 1.0);
        return sum - integral;
      };
      const double t = dim == 1 ? 1e-4 : 2e-3;
      const double extrapolated = 2.0 * regularised(0.5 * t) - regularised(t);
      CHECK(lattice_zeta(dim, s) == doctest::Approx(extrapolated).epsilon(1e-5));
    }
  }
}

TEST_CASE("periodized_kernel is symmetric and dominated by the nearest image") {
  const GridSpec g(2, 16, 1.0);
  const auto k = periodized_kernel(g, 2.5);
  CHECK(k[0] == 0.0);
  CHECK(k[std::size_t(g.ravel(1, 3))] == k[std::size_t(g.ravel(3, 1))]);
  CHECK(k[std::size_t(g.ravel(1, 3))] == k[std::size_t(g.ravel(15, 13))]);
  const double dx = g.spacing();
  CHECK(k[std::size_t(g.ravel(1, 0))] > std::pow(dx, -2.5));
  CHECK(k[std::size_t(g.ravel(1, 0))] < 1.02 * std::pow(dx, -2.5));
  CHECK_THROWS_AS(periodized_kernel(g, 2.0), std::invalid_argument);
}

TEST_CASE("pv_frac_laplacian annihilates constants and is linear") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 256 : 32, 4.0);
    const auto params = PVKernelParams::make(dim, 0.5);
    for (double cutoff : {g.spacing(), 3.0 * g.spacing()})
      CHECK(pv_frac_laplacian(ComplexField::constant(g, 2.5), params, cutoff).sup_norm() < 1e-9);
    const auto f = testing::random_field(g, 5), h = testing::random_field(g, 6);
    const std::complex<double> a(1.5, -0.5), b(0.25, 2.0);
    const auto lhs = pv_frac_laplacian(a * f + b * h, params, g.spacing());
    const auto rhs = a * pv_frac_laplacian(f, params, g.spacing()) + b * pv_frac_laplacian(h, params, g.spacing());
    CHECK(relative_l2(lhs, rhs) < 1e-12);
    CHECK_THROWS_AS(pv_frac_laplacian(f, params, 0.5 * g.spacing()), std::invalid_argument);
  }
}

TEST_CASE("pv_frac_laplacian agrees with the multiplier on a Gaussian, n = 1") {
  const GridSpec g(1, 4096, 4.0);
  const auto bump = testing::gaussian(g, 0.4);
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto params = PVKernelParams::make(1, beta);
    const auto spectral = frac_laplacian(bump, beta);
    const double err = relative_l2(pv_frac_laplacian(bump, params, g.spacing()), spectral);
    CHECK(err < 1e-3);
    // Cutoff variant: same answer within the O(cutoff^{4-beta}) Taylor error.
    CHECK(relative_l2(pv_frac_laplacian(bump, params, 4.0 * g.spacing()), spectral) < 1e-3);
  }
}

TEST_CASE("pv_frac_laplacian agrees with the multiplier on a Gaussian, n = 2") {
  const GridSpec g(2, 64, 4.0);
  const auto bump = testing::gaussian(g, 0.6);
  const auto params = PVKernelParams::make(2, 0.5);
  CHECK(relative_l2(pv_frac_laplacian(bump, params, g.spacing()), frac_laplacian(bump, 0.5)) < 1e-3);
}
