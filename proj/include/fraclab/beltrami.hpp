#pragma once

#include "fraclab/grid.hpp"

#include <string>
#include <vector>

namespace fraclab {

/// mu (or nu) with sup norm k < 1 and support in |z| <= R0 <= L/4 (samples
/// with modulus above 1e-12 count as support).
class BeltramiCoefficient {
 public:
  static BeltramiCoefficient make(const ComplexField& field);
  static BeltramiCoefficient zero(const GridSpec& grid);

  const ComplexField& field() const { return field_; }
  double sup_bound() const { return sup_bound_; }
  double support_radius() const { return support_radius_; }
  const GridSpec& grid() const { return field_.grid(); }

 private:
  BeltramiCoefficient(ComplexField f, double k, double r) : field_(std::move(f)), sup_bound_(k), support_radius_(r) {}
  ComplexField field_;
  double sup_bound_;
  double support_radius_;
};

/// sup |mu| + |nu|; throws unless it is < 1.
double pair_bound(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 200;
  /// Above this ellipticity bound the Krylov path is used.
  double krylov_threshold = 0.7;
  int restart = 60;
};

struct SolveReport {
  int iterations = 0;
  /// Relative residual ||A h_m - g|| / ||g|| of each iterate (Krylov: of each
  /// inner iterate, as tracked by the Arnoldi recurrence).
  std::vector<double> residual_curve;
  double contraction_estimate = 0.0;
  double final_residual = 0.0;  ///< recomputed from the returned h
  bool converged = false;
  std::string method;
};

/// h - mu B h - nu conj(B h).
ComplexField apply_beltrami_operator(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu,
                                     const ComplexField& h);

struct IntegralSolution {
  ComplexField h;
  SolveReport report;
};

/// Solves (Id - mu B - nu conj B) h = g. Neumann iteration h <- g + mu B h +
/// nu conj(B h) from h = 0 when sup(|mu|+|nu|) <= krylov_threshold, otherwise
/// restarted GMRES on the real 2M-dimensional form (the operator is only
/// real-linear when nu != 0). Never throws on non-convergence.
IntegralSolution solve_integral_equation(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu,
                                         const ComplexField& g, const SolveOptions& options = {});

struct PrincipalSolution {
  ComplexField phi_displacement;  ///< C h; phi = z + C h
  ComplexField dphi;              ///< 1 + B h
  ComplexField dbarphi;           ///< h
  SolveReport report;
  double beltrami_residual = 0.0;  ///< ||dbarphi - mu dphi|| / ||dphi||
};

PrincipalSolution principal_solution(const BeltramiCoefficient& mu, const SolveOptions& options = {});

struct LogDerivative {
  ComplexField g;       ///< log d phi, as C F
  ComplexField source;  ///< F solving (Id - mu B) F = d mu
  SolveReport report;
  double consistency = 0.0;  ///< ||exp(g) - dphi|| / ||dphi||
  bool consistent = true;    ///< consistency <= 1e-2
};

/// log d phi from dbar g - mu d g = d mu, with no pointwise logarithm.
LogDerivative log_derivative(const BeltramiCoefficient& mu, const SolveOptions& options = {});

/// I_{1-alpha} (Id - mu B) D^{1-alpha} F evaluated as
/// P0 (F - mu B F) - I_{1-alpha} [mu, D^{1-alpha}] B F, P0 the mean removal.
ComplexField apply_T_mu(const BeltramiCoefficient& mu, double alpha, const ComplexField& f);

/// The same operator as the literal composition.
ComplexField apply_T_mu_composed(const BeltramiCoefficient& mu, double alpha, const ComplexField& f);

/// T_mu in the orthonormal Fourier basis without the zero mode (planar, N <= 32).
Eigen::MatrixXcd T_mu_matrix(const BeltramiCoefficient& mu, double alpha);
double T_mu_min_singular_value(const BeltramiCoefficient& mu, double alpha);

struct AprioriReport {
  double alpha = 0.0;
  double p = 0.0;
  double input_norm = 0.0;   ///< ||g||_{W^{alpha,p}}
  double output_norm = 0.0;  ///< ||d f||_{W^{alpha,p}} + ||dbar f||_{W^{alpha,p}}
  double ratio = 0.0;
  SolveReport solve;
};

/// ||u||_p + ||D^alpha u||_p.
double sobolev_norm(const ComplexField& u, double alpha, double p);

/// Requires 1 < p < 2/alpha.
AprioriReport apriori_check(const BeltramiCoefficient& mu, const BeltramiCoefficient& nu, double alpha, double p,
                            const ComplexField& g, const SolveOptions& options = {});

}  // namespace fraclab
