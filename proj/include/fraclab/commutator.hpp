#pragma once

#include "fraclab/grid.hpp"

#include <vector>

namespace fraclab {

/// [b, D^beta] f = b D^beta f - D^beta (b f), spectrally.
ComplexField commutator_apply(const ComplexField& b, const ComplexField& f, double beta);

/// How |x - y|^{-(n+beta)} is read on the torus. `periodized` sums all
/// periodic images, which is the kernel the spectral D^beta realises;
/// `minimum_image` keeps only the nearest one, which is the planar kernel for
/// points less than L apart.
enum class KernelDistance { periodized, minimum_image };

/// Dense quadrature of the commutator kernel
///   entry(x, y) = C_{n,beta} (b(y) - b(x)) k(x - y) * spacing^n
/// with k the torus reading of |x - y|^{-(n+beta)} and a zero diagonal.
struct KernelMatrix {
  GridSpec grid;
  double beta;
  ComplexField symbol_b;
  Eigen::MatrixXcd entries;
  KernelDistance distance = KernelDistance::periodized;
};

/// n = 1 with N <= 4096, or n = 2 with N <= 48.
KernelMatrix build_kernel_matrix(const ComplexField& b, double beta,
                                 KernelDistance distance = KernelDistance::periodized);

ComplexField apply(const KernelMatrix& kernel, const ComplexField& f);

/// Same quadrature as KernelMatrix without storing it.
ComplexField kernel_apply(const ComplexField& b, const ComplexField& f, double beta,
                          KernelDistance distance = KernelDistance::periodized);

struct KernelBound {
  double estimate = 0.0;  ///< max row L1 norm of the kernel
  double bound = 0.0;     ///< C sigma_n (|grad b|_inf / (1-beta) + 2 |b|_inf / beta)
  double constant = 0.0;  ///< C_{n,beta}
  double grad_sup = 0.0;
  double b_sup = 0.0;
};

KernelBound estimate_A(const KernelMatrix& kernel);

struct TailCurve {
  std::vector<double> radii;
  std::vector<double> norms;     ///< sup over probes of ||C_b f chi_{|x|>R}||_p
  std::vector<double> envelope;  ///< sup over probes and |x| >= R of |C_b f(x)|
  double envelope_slope = 0.0;   ///< least-squares slope of log envelope against log R
};

/// Probes are rescaled to unit L^{np/(n - beta p)} norm. The commutator is
/// evaluated with kernel_apply so that periodic images do not bend the tail.
/// Radii must lie in (0, L/2].
TailCurve tail_decay_probe(const ComplexField& b, double beta, double p, const std::vector<ComplexField>& probes,
                           const std::vector<double>& radii);

struct TranslateCurve {
  std::vector<double> shifts;  ///< |h|
  std::vector<double> values;  ///< B(h)
  double c_fractional = 0.0;   ///< fitted c1 in c1 |h|^{1-beta} + c2 |h|
  double c_linear = 0.0;       ///< fitted c2
  double max_relative_misfit = 0.0;
};

/// B(h) = max_y sum_x |entry(x+h, y) - entry(x, y)| for lattice shifts
/// (in units of the spacing, first axis), plus a nonnegative least-squares
/// fit of c1 |h|^{1-beta} + c2 |h|.
TranslateCurve translate_modulus(const KernelMatrix& kernel, const std::vector<int>& shifts);

/// ||[b, D^beta] f||_p / (||D^beta b||_{n/beta} ||f||_{np/(n-beta p)}).
double kpv_ratio(const ComplexField& b, const ComplexField& f, double beta, double p);

/// Leading singular values of the kernel matrix (the entries already carry
/// the quadrature weight, so they represent the operator on L^2).
Eigen::VectorXd compactness_spectrum(const KernelMatrix& kernel, Index count);
/// Descending. Real matrices go through a bidiagonal SVD; complex ones through
/// the Gram eigenvalues, so values below ~1e-8 sigma_1 are not resolved.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m, Index count);

/// Smallest k with sigma_{k+1} / sigma_1 < eps (0 for the zero operator).
Index eps_rank(const Eigen::VectorXd& singular_values, double eps);

/// Matrix of f -> b * T f where T is the Beurling transform (n = 2) or the
/// Hilbert-type transform -i sign(xi) (n = 1).
Eigen::MatrixXcd comparison_operator_matrix(const ComplexField& b);

struct CompactnessReport {
  KernelBound a;
  TailCurve tail;
  TranslateCurve translate;
  Eigen::VectorXd sv_decay;
  std::vector<double> kpv_ratios;
};

}  // namespace fraclab
