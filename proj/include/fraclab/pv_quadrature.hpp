#pragma once

#include "fraclab/grid.hpp"

#include <vector>

namespace fraclab {

/// Normalisation of the singular-integral form of D^beta = (-Delta)^{beta/2}:
///   D^beta u(x) = C_{n,beta} p.v. int (u(x) - u(y)) / |x - y|^{n+beta} dy.
/// Valid for beta in (0, 2).
double pv_constant(int dim, double beta);

struct PVKernelParams {
  double beta;
  int dim;
  double constant;

  static PVKernelParams make(int dim, double beta);
};

/// Dirichlet beta function sum_k (-1)^k (2k+1)^{-s}, s > 0.
double dirichlet_beta(double s);

/// Analytic continuation of sum_{m in Z^n, m != 0} |m|^{-sigma}: 2 zeta(sigma)
/// in 1D and 4 zeta(sigma/2) beta(sigma/2) on the square lattice.
double lattice_zeta(int dim, double sigma);

/// Torus kernel sum_{m in Z^n} |z + 2Lm|^{-exponent} tabulated over the
/// displacement lattice z = wavenumber(i) * spacing (same layout as a field).
/// The entry at z = 0 is 0. Requires exponent > n.
std::vector<double> periodized_kernel(const GridSpec& grid, double exponent);

/// Direct quadrature of the principal-value integral on the torus.
/// Lattice points with periodic distance < cutoff are excluded from the sum and
/// replaced by the second-order Taylor model of u; the punctured-lattice
/// correction (lattice zeta term) makes the rule O(h^{4-beta}) for smooth u.
/// Requires spacing <= cutoff <= L/2.
ComplexField pv_frac_laplacian(const ComplexField& f, const PVKernelParams& params, double cutoff);

/// Fourth-order periodic finite-difference Laplacian.
ComplexField fd_laplacian(const ComplexField& f);

}  // namespace fraclab
