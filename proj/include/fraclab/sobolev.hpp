#pragma once

#include "fraclab/grid.hpp"

#include <optional>
#include <vector>

namespace fraclab {

/// ||D^alpha f||_p, alpha in (0,1), p in (1, inf).
double homogeneous_seminorm(const ComplexField& f, double alpha, double p);

/// (sum_x sum_y |f(x) - f(y)|^p k(x - y) spacing^{2n})^{1/p} with k the
/// periodized |.|^{-(n + alpha p)}. n = 1 needs N <= 4096, n = 2 needs N <= 96.
double gagliardo_seminorm(const ComplexField& f, double alpha, double p);

/// Continuum value of gagliardo / homogeneous at p = 2: sqrt(2 / C_{n,2 alpha}).
double gagliardo_ratio_p2(int dim, double alpha);

/// Sup over dyadic cells of `side` samples per axis (aligned at index 0) of
/// the mean of |f - cell mean|.
double dyadic_oscillation(const ComplexField& f, int side);

/// Dyadic BMO: max of dyadic_oscillation over every side 2, 4, ..., N.
double bmo_norm(const ComplexField& f);

struct ModulusCurve {
  std::vector<double> scales;     ///< cell side in physical units, increasing
  std::vector<double> per_scale;  ///< dyadic_oscillation at that side
  std::vector<double> modulus;    ///< sup of per_scale over all sides <= scale
};

/// Scales must be dyadic multiples 2^j * spacing (j >= 0) no larger than L/2.
ModulusCurve vmo_modulus(const ComplexField& f, const std::vector<double>& scales);

/// 2 spacing, 4 spacing, ... up to `largest` (inclusive when dyadic).
std::vector<double> dyadic_scales(const GridSpec& grid, double largest);

struct NormReport {
  double lp = 0.0;
  double homogeneous = 0.0;
  double full = 0.0;
  std::optional<double> gagliardo;  ///< only when the grid is within the dense bound
  double bmo = 0.0;
  ModulusCurve vmo;
};

NormReport norm_report(const ComplexField& f, double alpha, double p);

}  // namespace fraclab
