#include "fraclab/experiment.hpp"

#include "fraclab/commutator.hpp"
#include "fraclab/families.hpp"
#include "fraclab/field_io.hpp"
#include "fraclab/multipliers.hpp"
#include "fraclab/pv_quadrature.hpp"
#include "fraclab/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace fraclab {

using nlohmann::json;

namespace {

constexpr std::pair<Suite, const char*> suite_names[] = {
    {Suite::verify_operators, "verify-operators"}, {Suite::commutator_suite, "commutator-suite"},
    {Suite::solve, "solve"},                       {Suite::log_regularity, "log-regularity"},
    {Suite::apriori_sweep, "apriori-sweep"},       {Suite::vmo_example, "vmo-example"}};

const std::set<std::string> family_kinds{"smooth_bump", "mollified_disk", "log_example", "random_bandlimited",
                                         "tent"};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

// Seeded complex Gaussian samples (lattice identities only need genericity).
ComplexField noise_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexField::Vector v(g.size());
  for (auto& x : v) x = {gauss(rng), gauss(rng)};
  return ComplexField(g, std::move(v));
}

ComplexField gaussian(const GridSpec& g, double width, std::complex<double> centre) {
  return ComplexField::sample(
      g, [&](std::complex<double> z) { return std::exp(-std::norm(z - centre) / (2.0 * width * width)); });
}

// Relative L2 distance over inner <= |z| <= outer.
double annulus_relative(const ComplexField& a, const ComplexField& b, double inner, double outer) {
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const auto p = a.grid().point(i);
    const double r = std::hypot(p[0], p[1]);
    if (r >= inner && r <= outer) {
      num += std::norm(a[i] - b[i]);
      den += std::norm(b[i]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? (*hi - *lo) / *lo : INFINITY;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_unit_interval(const std::vector<double>& v, const char* name) {
  for (double x : v) require(x > 0.0 && x < 1.0, std::string(name) + " entries must lie in (0,1)");
}

template <typename T>
T get_checked(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
  }
}

// ---------------------------------------------------------------------------
// Criteria. Each one reads the base grid (points, half_width) of its suite.

CriterionResult criterion_identities(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{1, "operator identities", true, "", json::object()};
  std::vector<std::string> names{"dz_cauchy_eq_beurling", "dbar_cauchy_eq_mean_removal", "beurling_dbar_eq_dz",
                                 "riesz_squares_eq_minus_mean_removal", "beurling_l2_isometry"};
  for (double beta : c.beta) names.push_back("potential_after_frac_laplacian_" + fmt(beta));
  CsvTable table{"operator_identities", {"points"}, {{}}};
  for (const auto& n : names) {
    table.header.push_back(n);
    table.columns.emplace_back();
  }
  double worst = 0.0;
  for (int points : {c.points / 4, c.points}) {
    const GridSpec g(2, points, c.half_width);
    const auto f = noise_field(g, c.seed + std::uint64_t(points));
    const auto f0 = remove_mean(f);
    std::vector<double> errs{
        relative_l2(dz(cauchy_transform(f)), beurling(f)),
        relative_l2(dbar(cauchy_transform(f)), f0),
        relative_l2(beurling(dbar(f)), dz(f)),
        relative_l2(riesz_transform(riesz_transform(f, 1), 1) + riesz_transform(riesz_transform(f, 2), 2), -f0),
        std::abs(lp_norm(beurling(f), 2.0) / lp_norm(f0, 2.0) - 1.0)};
    for (double beta : c.beta) errs.push_back(relative_l2(riesz_potential(frac_laplacian(f, beta), beta), f0));
    json per = json::object();
    table.columns[0].push_back(points);
    for (std::size_t i = 0; i < errs.size(); ++i) {
      per[names[i]] = errs[i];
      table.columns[i + 1].push_back(errs[i]);
      worst = std::max(worst, errs[i]);
    }
    r.details["N=" + std::to_string(points)] = per;
  }
  r.passed = worst <= 1e-10;
  r.details["max_error"] = worst;
  r.details["tolerance"] = 1e-10;
  r.summary = "max relative error " + fmt(worst) + " over N=" + std::to_string(c.points / 4) + "," +
              std::to_string(c.points) + " (tol 1e-10)";
  if (sink) sink->curves.push_back(std::move(table));
  return r;
}

CriterionResult criterion_pv_oracle(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{2, "principal-value quadrature vs multiplier", true, "", json::object()};
  double worst = 0.0;
  CsvTable table{"pv_oracle", {"dim", "points", "beta", "relative_error"}, {{}, {}, {}, {}}};
  for (int dim : {1, 2}) {
    const int points = dim == 1 ? 16 * c.points : c.points;
    const GridSpec g(dim, points, c.half_width);
    const auto bump = gaussian(g, 0.5, dim == 1 ? std::complex<double>(0.3) : std::complex<double>(0.3, -0.2));
    for (double beta : c.beta) {
      const double err =
          relative_l2(pv_frac_laplacian(bump, PVKernelParams::make(dim, beta), g.spacing()), frac_laplacian(bump, beta));
      r.details["n=" + std::to_string(dim) + ",N=" + std::to_string(points) + ",beta=" + fmt(beta)] = err;
      table.columns[0].push_back(dim);
      table.columns[1].push_back(points);
      table.columns[2].push_back(beta);
      table.columns[3].push_back(err);
      worst = std::max(worst, err);
    }
  }
  r.passed = worst <= 1e-3;
  r.details["max_error"] = worst;
  r.summary = "max relative L2 error " + fmt(worst) + " (tol 1e-3)";
  if (sink) sink->curves.push_back(std::move(table));
  return r;
}

CriterionResult criterion_riesz_constant(const ExperimentConfig& c, SuiteResult*) {
  CriterionResult r{3, "Riesz representation of dbar", true, "", json::object()};
  const GridSpec g = GridSpec(2, c.points, c.half_width);
  std::optional<std::complex<double>> reference;
  double worst_residual = 0.0, worst_spread = 0.0;
  for (double alpha : c.alpha) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto rc = measure_riesz_constant(remove_mean(noise_field(g, c.seed + 31 * s)), alpha);
      if (!reference) reference = rc.constant;
      worst_residual = std::max(worst_residual, rc.residual);
      worst_spread = std::max(worst_spread, std::abs(rc.constant - *reference));
    }
  }
  r.passed = worst_residual <= 1e-10 && worst_spread <= 1e-10;
  r.details["constant"] = {{"re", reference->real()}, {"im", reference->imag()}};
  r.details["max_residual"] = worst_residual;
  r.details["max_constant_spread"] = worst_spread;
  r.summary = "c = " + fmt(reference->real()) + (reference->imag() < 0 ? " - " : " + ") +
              fmt(std::abs(reference->imag())) + "i, residual " + fmt(worst_residual) + ", spread " +
              fmt(worst_spread) + " (tol 1e-10)";
  return r;
}

constexpr int kpv_pairs = 50;

CriterionResult criterion_kpv(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{4, "commutator ratio census", true, "", json::object()};
  const double beta = c.beta[0], p = c.p[0];
  std::vector<double> maxima;
  CsvTable table{"kpv_ratios", {"pair"}, {{}}};
  for (int i = 0; i < kpv_pairs; ++i) table.columns[0].push_back(i);
  bool finite = true;
  for (int points : {c.points / 2, c.points}) {
    const GridSpec g = GridSpec(2, points, c.half_width);
    std::vector<double> ratios;
    for (int i = 0; i < kpv_pairs; ++i) {
      const auto b = families::random_bandlimited(g, 1.0, *c.family.seed + 2 * std::uint64_t(i), c.family.radius);
      const auto f = families::random_bandlimited(g, 1.0, *c.family.seed + 2 * std::uint64_t(i) + 1, c.family.radius);
      const double q = kpv_ratio(b, f, beta, p);
      finite = finite && std::isfinite(q) && q > 0.0;
      ratios.push_back(q);
    }
    maxima.push_back(*std::max_element(ratios.begin(), ratios.end()));
    table.header.push_back("ratio_N" + std::to_string(points));
    table.columns.push_back(ratios);
  }
  const double drift = std::abs(maxima[1] / maxima[0] - 1.0);
  r.passed = finite && drift <= 0.2;
  r.details = {{"beta", beta}, {"p", p}, {"pairs", kpv_pairs}, {"max_ratio", maxima}, {"relative_drift", drift}};
  r.summary = "max ratio " + join(maxima) + " at N=" + std::to_string(c.points / 2) + "," + std::to_string(c.points) +
              ", drift " + fmt(drift) + " (tol 0.2)";
  if (sink) sink->curves.push_back(std::move(table));
  return r;
}

CriterionResult criterion_frechet_kolmogorov(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{5, "Frechet-Kolmogorov certificate", true, "", json::object()};
  const double beta = c.beta[1], p = c.p[1], bump_radius = 0.25;
  const GridSpec g(1, 8 * c.points, c.half_width);
  const auto b = families::smooth_bump(g, 1.0, bump_radius);
  const auto kernel = build_kernel_matrix(b, beta);
  const auto bound = estimate_A(kernel);

  std::vector<double> radii;
  const double lo = 3.0 * bump_radius, hi = 0.5 * c.half_width;
  for (int i = 1; i <= 6; ++i) radii.push_back(lo + (hi - lo) * i / 6.0);
  std::vector<ComplexField> probes{families::smooth_bump(g, 1.0, 0.5), families::smooth_bump(g, 1.0, 0.3, 0.4),
                                   gaussian(g, 0.3, 0.1), families::random_bandlimited(g, 1.0, c.seed, 0.9)};
  const auto tail = tail_decay_probe(b, beta, p, probes, radii);

  std::vector<int> shifts{0};
  for (int s = 1; s <= 64; s *= 2) shifts.push_back(s);
  const auto modulus = translate_modulus(kernel, shifts);

  const bool a_ok = bound.estimate <= bound.bound;
  bool tail_ok = true;
  for (std::size_t i = 1; i < tail.norms.size(); ++i) tail_ok = tail_ok && tail.norms[i] <= tail.norms[i - 1];
  const double target = -(1.0 + beta);
  const bool slope_ok = std::abs(tail.envelope_slope - target) <= 0.15;
  bool monotone = true;
  for (std::size_t i = 1; i < modulus.values.size(); ++i)
    monotone = monotone && modulus.values[i] >= modulus.values[i - 1];
  const bool vanishing = modulus.values[0] == 0.0 && modulus.values[1] <= 0.25 * modulus.values.back();
  const bool fit_ok = modulus.c_fractional >= 0.0 && modulus.c_linear >= 0.0 &&
                      modulus.c_fractional + modulus.c_linear > 0.0 && modulus.max_relative_misfit <= 0.25;
  r.passed = a_ok && tail_ok && slope_ok && monotone && vanishing && fit_ok;
  r.details = {{"points", g.points()},
               {"beta", beta},
               {"p", p},
               {"A", to_json(bound)},
               {"tail", to_json(tail)},
               {"translate", to_json(modulus)},
               {"checks",
                {{"A_estimate_le_bound", a_ok},
                 {"tail_decreasing", tail_ok},
                 {"slope_within_0.15", slope_ok},
                 {"translate_monotone", monotone},
                 {"translate_vanishes_at_zero", vanishing},
                 {"fit_nonnegative_misfit_le_0.25", fit_ok}}}};
  r.summary = "A " + fmt(bound.estimate) + " <= " + fmt(bound.bound) + ", slope " + fmt(tail.envelope_slope) +
              " (target " + fmt(target) + "), fit c1 " + fmt(modulus.c_fractional) + " c2 " +
              fmt(modulus.c_linear) + " misfit " + fmt(modulus.max_relative_misfit);
  if (sink) {
    sink->curves.push_back({"tail_curve", {"radius", "norm", "envelope"}, {tail.radii, tail.norms, tail.envelope}});
    sink->curves.push_back({"translate_curve", {"shift", "value"}, {modulus.shifts, modulus.values}});
  }
  return r;
}

CriterionResult criterion_rank_fingerprint(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{6, "compactness fingerprint", true, "", json::object()};
  const double beta = c.beta[2];
  std::vector<double> kernel_ranks, coarse_ranks, comparison_ranks;
  for (int points : {2 * c.points, 4 * c.points}) {
    const GridSpec g(1, points, c.half_width);
    const auto sv = compactness_spectrum(build_kernel_matrix(families::smooth_bump(g, 1.0, 0.5), beta), points);
    kernel_ranks.push_back(double(eps_rank(sv, 1e-2)));
    coarse_ranks.push_back(double(eps_rank(sv, 1e-1)));
    if (sink) {
      const Index head = std::min<Index>(sv.size(), 128);
      sink->curves.push_back({"kernel_singular_values_N" + std::to_string(points),
                              {"index", "sigma_over_sigma1"},
                              {{}, {}}});
      auto& t = sink->curves.back();
      for (Index i = 0; i < head; ++i) {
        t.columns[0].push_back(double(i + 1));
        t.columns[1].push_back(sv[0] > 0.0 ? sv[i] / sv[0] : 0.0);
      }
    }
  }
  for (int points : {c.points, 2 * c.points, 4 * c.points}) {
    const GridSpec g(1, points, c.half_width);
    const auto chi = ComplexField::sample(g, [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
    comparison_ranks.push_back(double(eps_rank(singular_values(comparison_operator_matrix(chi), points), 1e-2)));
  }
  const bool stable = kernel_ranks[0] == kernel_ranks[1];
  const bool growing = comparison_ranks[1] > comparison_ranks[0] && comparison_ranks[2] > comparison_ranks[1];
  r.passed = stable && growing;
  r.details = {{"beta", beta},
               {"kernel_points", {2 * c.points, 4 * c.points}},
               {"kernel_eps_rank_1e-2", kernel_ranks},
               {"kernel_eps_rank_1e-1", coarse_ranks},
               {"comparison_points", {c.points, 2 * c.points, 4 * c.points}},
               {"comparison_eps_rank_1e-2", comparison_ranks},
               {"checks", {{"kernel_rank_equal", stable}, {"comparison_rank_increasing", growing}}}};
  r.summary = "kernel eps-rank " + join(kernel_ranks) + " (eps 0.1: " + join(coarse_ranks) + "), comparison " +
              join(comparison_ranks);
  return r;
}

CriterionResult criterion_disk_oracle(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{7, "mollified disk closed form and Neumann bound", true, "", json::object()};
  const GridSpec g = GridSpec(2, c.points, c.half_width);
  const double k = c.family.k, radius = c.family.radius;
  const double eps = c.family.eps.empty() ? 4.0 * g.spacing() : c.family.eps[0];
  const auto mu = BeltramiCoefficient::make(families::mollified_disk(g, k, eps, radius));
  const auto sol = principal_solution(mu, c.solver);
  const auto exterior = ComplexField::sample(g, [&](std::complex<double> z) {
    return std::abs(z) > 0.5 * radius ? 1.0 - k * radius * radius / (z * z) : std::complex<double>(1.0);
  });
  const double inside = annulus_relative(sol.dphi, ComplexField::constant(g, 1.0), 0.0, 0.8 * radius);
  const double outside = annulus_relative(sol.dphi, exterior, 1.25 * radius, 2.0 * radius);
  const bool oracle_ok = sol.report.converged && inside <= 0.02 && outside <= 0.02;

  bool bound_ok = true;
  json sweep = json::array();
  for (double ks : c.k_sweep) {
    const auto m = BeltramiCoefficient::make(families::mollified_disk(g, ks, eps, radius));
    SolveOptions neumann = c.solver;
    neumann.krylov_threshold = std::max(neumann.krylov_threshold, ks);
    const auto s = solve_integral_equation(m, BeltramiCoefficient::zero(g), m.field(), neumann);
    bool ok = s.report.converged && s.report.method == "neumann";
    double worst = 0.0;
    for (std::size_t i = 0; i < s.report.residual_curve.size(); ++i) {
      const double ratio = s.report.residual_curve[i] / std::pow(ks, double(i + 1));
      worst = std::max(worst, ratio);
    }
    ok = ok && worst <= 1.0 + 1e-9;
    bound_ok = bound_ok && ok;
    sweep.push_back({{"k", ks}, {"max_residual_over_k_power", worst}, {"passed", ok}, {"solve", to_json(s.report)}});
    if (sink) {
      CsvTable t{"neumann_residuals_k" + fmt(ks), {"iteration", "residual", "k_power"}, {{}, {}, {}}};
      for (std::size_t i = 0; i < s.report.residual_curve.size(); ++i) {
        t.columns[0].push_back(double(i + 1));
        t.columns[1].push_back(s.report.residual_curve[i]);
        t.columns[2].push_back(std::pow(ks, double(i + 1)));
      }
      sink->curves.push_back(std::move(t));
    }
  }
  r.passed = oracle_ok && bound_ok;
  r.details = {{"k", k},
               {"eps", eps},
               {"radius", radius},
               {"inside_error", inside},
               {"outside_error", outside},
               {"beltrami_residual", sol.beltrami_residual},
               {"solve", to_json(sol.report)},
               {"neumann_sweep", sweep}};
  r.summary = "dphi error inside " + fmt(inside) + " outside " + fmt(outside) + " (tol 0.02), k^m bound " +
              (bound_ok ? "holds" : "violated") + " for k in {" + join(c.k_sweep) + "}";
  if (sink) {
    sink->fields.emplace_back("mu", mu.field());
    sink->fields.emplace_back("dphi", sol.dphi);
    sink->fields.emplace_back("phi_displacement", sol.phi_displacement);
  }
  return r;
}

CriterionResult criterion_log_derivative(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{8, "log-derivative consistency and trend", true, "", json::object()};
  const double alpha = c.alpha[0], exponent = 2.0 / alpha;
  const GridSpec g = GridSpec(2, c.points, c.half_width);
  const auto smooth = log_derivative(BeltramiCoefficient::make(families::smooth_bump(g, 0.4)), c.solver);
  const bool consistent = smooth.report.converged && smooth.consistency <= 1e-4;

  const GridSpec trend_grid = GridSpec(2, c.points, 0.75 * c.half_width);
  const auto family = generate_family(c.family, trend_grid);
  std::vector<double> norms, consistency;
  bool converged = true;
  for (const auto& mu : family) {
    const auto ld = log_derivative(mu, c.solver);
    converged = converged && ld.report.converged;
    norms.push_back(homogeneous_seminorm(ld.g, alpha, exponent));
    consistency.push_back(ld.consistency);
  }
  const double spread = relative_spread(norms);
  r.passed = consistent && converged && spread <= 0.3;
  r.details = {{"smooth_consistency", smooth.consistency},
               {"smooth_solve", to_json(smooth.report)},
               {"alpha", alpha},
               {"norm_exponent", exponent},
               {"family", c.family.kind},
               {"eps", c.family.eps},
               {"trend_half_width", trend_grid.half_width()},
               {"norms", norms},
               {"family_consistency", consistency},
               {"relative_spread", spread}};
  r.summary = "consistency " + fmt(smooth.consistency) + " (tol 1e-4), |D^a log dphi|_" + fmt(exponent) + " = " +
              join(norms) + " spread " + fmt(spread) + " (tol 0.3)";
  if (sink) sink->curves.push_back({"log_derivative_trend", {"eps", "norm"}, {c.family.eps, norms}});
  return r;
}

CriterionResult criterion_apriori(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{9, "a priori ratio stability", true, "", json::object()};
  const double alpha = c.alpha[0];
  std::vector<std::vector<double>> ratios(c.p.size());
  json runs = json::array();
  for (int points : {c.points, 2 * c.points}) {
    const GridSpec g = GridSpec(2, points, c.half_width);
    const auto family = generate_family(c.family, g);
    const auto nu = BeltramiCoefficient::zero(g);
    const auto rhs = families::smooth_bump(g, 1.0, 0.8, {0.1, 0.1});
    for (std::size_t i = 0; i < c.p.size(); ++i) {
      const auto rep = apriori_check(family.front(), nu, alpha, c.p[i], rhs, c.solver);
      ratios[i].push_back(rep.ratio);
      json j = to_json(rep);
      j["points"] = points;
      runs.push_back(j);
    }
  }
  bool ok = true;
  std::vector<double> drifts;
  for (const auto& pr : ratios) {
    const double drift = std::abs(pr[1] / pr[0] - 1.0);
    drifts.push_back(drift);
    ok = ok && std::isfinite(pr[0]) && std::isfinite(pr[1]) && pr[0] > 0.0 && drift <= 0.25;
  }
  for (const auto& run : runs) ok = ok && run["solve"]["converged"].get<bool>();
  r.passed = ok;
  r.details = {{"alpha", alpha}, {"p", c.p}, {"runs", runs}, {"relative_drift", drifts}};
  r.summary = "alpha " + fmt(alpha) + ", p {" + join(c.p) + "}: drift N=" + std::to_string(c.points) + "->" +
              std::to_string(2 * c.points) + " " + join(drifts) + " (tol 0.25)";
  if (sink) {
    CsvTable t{"apriori_ratios", {"p", "ratio_N" + std::to_string(c.points), "ratio_N" + std::to_string(2 * c.points)},
               {c.p, {}, {}}};
    for (const auto& pr : ratios) {
      t.columns[1].push_back(pr[0]);
      t.columns[2].push_back(pr[1]);
    }
    sink->curves.push_back(std::move(t));
  }
  return r;
}

CriterionResult criterion_vmo(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{10, "VMO coefficient, non-VMO derivative", true, "", json::object()};
  const GridSpec g = GridSpec(2, c.points, c.half_width);
  const auto mu = families::log_example(g, c.family.k);
  const auto dphi = families::log_example_derivative(g, c.family.k);
  const auto scales = dyadic_scales(g, 0.5);
  const auto mu_curve = vmo_modulus(mu, scales);
  const auto d_curve = vmo_modulus(dphi, scales);
  const double mu_top = mu_curve.modulus.back(), d_top = d_curve.modulus.back();
  const bool mu_ok = mu_curve.modulus[0] <= mu_top / 3.0 && mu_curve.modulus[1] <= mu_top / 3.0;
  const bool d_ok = d_curve.modulus[0] >= 2.0 * d_top / 3.0 && d_curve.modulus[1] >= 2.0 * d_top / 3.0;
  r.passed = mu_ok && d_ok;
  r.details = {{"k", c.family.k},
               {"mu", to_json(mu_curve)},
               {"dphi", to_json(d_curve)},
               {"mu_bmo", bmo_norm(mu)},
               {"dphi_bmo", bmo_norm(dphi)},
               {"checks", {{"mu_fine_le_third", mu_ok}, {"dphi_fine_ge_two_thirds", d_ok}}}};
  r.summary = "mu modulus " + fmt(mu_curve.modulus[0]) + ", " + fmt(mu_curve.modulus[1]) + " vs " + fmt(mu_top) +
              "; dphi modulus " + fmt(d_curve.modulus[0]) + ", " + fmt(d_curve.modulus[1]) + " vs " + fmt(d_top);
  if (sink) {
    sink->curves.push_back({"vmo_modulus",
                            {"scale", "mu_per_scale", "mu_modulus", "dphi_per_scale", "dphi_modulus"},
                            {mu_curve.scales, mu_curve.per_scale, mu_curve.modulus, d_curve.per_scale,
                             d_curve.modulus}});
    sink->fields.emplace_back("log_example_mu", mu);
    sink->fields.emplace_back("log_example_dphi", dphi);
  }
  return r;
}

constexpr double t_mu_floor = 0.05;

CriterionResult criterion_t_mu(const ExperimentConfig& c, SuiteResult* sink) {
  CriterionResult r{11, "T_mu lower bound", true, "", json::object()};
  const double alpha = c.alpha[0];
  const GridSpec g(2, 32, 5.0);
  std::vector<double> sigma;
  std::vector<double> eps = c.family.eps;
  if (eps.empty()) eps.push_back(4.0 * g.spacing());
  for (double e : eps)
    sigma.push_back(T_mu_min_singular_value(BeltramiCoefficient::make(families::mollified_disk(g, c.family.k, e)), alpha));
  const double smallest = *std::min_element(sigma.begin(), sigma.end());
  r.passed = smallest >= t_mu_floor;
  r.details = {{"alpha", alpha}, {"k", c.family.k}, {"eps", eps}, {"points", 32}, {"half_width", 5.0},
               {"sigma_min", sigma}, {"floor", t_mu_floor}};
  r.summary = "sigma_min " + join(sigma) + " (floor " + fmt(t_mu_floor) + ")";
  if (sink) sink->curves.push_back({"t_mu_sigma_min", {"eps", "sigma_min"}, {eps, sigma}});
  return r;
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) {
  for (const auto& [s, n] : suite_names)
    if (name == n) return s;
  return std::nullopt;
}

std::string suite_name(Suite suite) {
  for (const auto& [s, n] : suite_names)
    if (s == suite) return n;
  return "?";
}

std::vector<int> suite_criteria(Suite suite) {
  switch (suite) {
    case Suite::verify_operators: return {1, 2, 3};
    case Suite::commutator_suite: return {4, 5, 6};
    case Suite::solve: return {7};
    case Suite::log_regularity: return {8, 11};
    case Suite::apriori_sweep: return {9};
    case Suite::vmo_example: return {10};
  }
  return {};
}

Suite suite_of_criterion(int id) {
  for (const auto& [s, n] : suite_names) {
    const auto ids = suite_criteria(s);
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) return s;
  }
  throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
}

ExperimentConfig default_config(Suite suite) {
  ExperimentConfig c;
  c.suite = suite;
  switch (suite) {
    case Suite::verify_operators:
      c.beta = {0.25, 0.5, 0.75};
      c.alpha = {0.6, 0.75};
      break;
    case Suite::commutator_suite:
      c.family = {"random_bandlimited", 0.5, {}, 1, 0.9};
      c.beta = {0.4, 0.5, 0.25};
      c.p = {1.5, 1.5};
      break;
    case Suite::solve:
      c.points = 512;
      c.half_width = 4.5;
      c.family = {"mollified_disk", 0.5, {}, std::nullopt, 1.0};
      c.k_sweep = {0.3, 0.5, 0.7};
      break;
    case Suite::log_regularity:
      c.points = 512;
      c.family = {"tent", 0.5, {0.2, 0.1, 0.05}, std::nullopt, 0.5};
      c.alpha = {0.75};
      break;
    case Suite::apriori_sweep:
      c.family = {"smooth_bump", 0.5, {}, std::nullopt, 1.0};
      c.alpha = {0.6};
      c.p = {1.5, 2.0, 2.5, 3.0};
      break;
    case Suite::vmo_example:
      c.points = 2048;
      c.family = {"log_example", 0.9, {}, std::nullopt, 1.0};
      break;
  }
  return c;
}

namespace {

// Radius of the support of every member of the family on a grid of the given spacing.
double family_reach(const FamilySpec& f, double spacing) {
  // The log example is centred half a cell off the origin.
  const double core =
      f.kind == "log_example" ? (f.k > 0.0 ? families::log_example_radius(f.k) + spacing : 0.0) : f.radius;
  double eps = f.eps.empty() ? 0.0 : *std::max_element(f.eps.begin(), f.eps.end());
  if (f.kind == "mollified_disk" && f.eps.empty()) eps = 4.0 * spacing;
  return core + eps;
}

void require_reach(const FamilySpec& f, const GridSpec& g) {
  require(family_reach(f, g.spacing()) <= g.half_width() / 4.0,
          "config: family support (radius + eps) exceeds L/4 = " + fmt(g.half_width() / 4.0) + " on the " +
              std::to_string(g.points()) + "-point grid");
}

}  // namespace

void validate(const ExperimentConfig& c) {
  try {
    GridSpec(2, c.points, c.half_width);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: grid: ") + e.what());
  }
  const auto& f = c.family;
  require(family_kinds.count(f.kind) == 1, "config: unknown family kind '" + f.kind + "'");
  require(f.k >= 0.0 && f.k < 1.0, "config: family k must lie in [0,1)");
  require(f.radius > 0.0 && std::isfinite(f.radius), "config: family radius must be positive");
  for (double e : f.eps) require(e > 0.0 && std::isfinite(e), "config: eps entries must be positive");
  require(f.kind != "random_bandlimited" || f.seed.has_value(), "config: random_bandlimited needs a seed");
  require(c.solver.tol > 0.0 && c.solver.tol < 1.0, "config: solver_tol must lie in (0,1)");
  require(c.solver.max_iter >= 1, "config: max_iter must be positive");
  require(c.solver.krylov_threshold > 0.0 && c.solver.krylov_threshold <= 1.0,
          "config: krylov_threshold must lie in (0,1]");
  require(c.solver.restart >= 1, "config: restart must be positive");
  require(!c.output_dir.empty(), "config: output_dir must not be empty");
  require_unit_interval(c.alpha, "alpha");
  require_unit_interval(c.beta, "beta");
  require_unit_interval(c.k_sweep, "k_sweep");
  for (double p : c.p) require(p > 1.0 && std::isfinite(p), "config: p entries must exceed 1");

  auto unused = [&](const std::vector<double>& v, const char* name) {
    require(v.empty(), std::string("config: '") + name + "' is not used by suite " + suite_name(c.suite));
  };
  const double L = c.half_width;
  switch (c.suite) {
    case Suite::verify_operators:
      require(!c.beta.empty() && !c.alpha.empty(), "config: verify-operators needs alpha and beta");
      require(c.points >= 32, "config: verify-operators needs N >= 32");
      unused(c.p, "p");
      unused(c.k_sweep, "k_sweep");
      break;
    case Suite::commutator_suite:
      require(c.beta.size() == 3, "config: commutator-suite needs beta = [census, certificate, rank]");
      require(c.p.size() == 2, "config: commutator-suite needs p = [census, certificate]");
      require(f.kind == "random_bandlimited", "config: commutator-suite draws random_bandlimited pairs");
      require(f.radius <= L / 2, "config: family radius must not exceed L/2");
      require(c.p[0] < 2.0 / c.beta[0] && c.p[1] < 1.0 / c.beta[1],
              "config: p must stay below n/beta for the census (n=2) and certificate (n=1)");
      require(c.points >= 32 && 8 * c.points <= 4096 && 4 * c.points <= 4096,
              "config: commutator-suite needs 32 <= N <= 512");
      require(L >= 2.0, "config: commutator-suite needs L >= 2 for the indicator comparison");
      unused(c.alpha, "alpha");
      unused(c.k_sweep, "k_sweep");
      break;
    case Suite::solve:
      require(f.kind == "mollified_disk", "config: solve uses the mollified_disk family");
      require(f.eps.size() <= 1, "config: solve takes at most one eps");
      require(2.0 * f.radius <= L, "config: solve needs 2 * radius <= L for the exterior annulus");
      require_reach(f, GridSpec(2, c.points, L));
      require(c.points >= 32, "config: solve needs N >= 32");
      unused(c.alpha, "alpha");
      unused(c.beta, "beta");
      unused(c.p, "p");
      break;
    case Suite::log_regularity:
      require(c.alpha.size() == 1 && c.alpha[0] > 0.5, "config: log-regularity needs one alpha in (1/2,1)");
      require(f.kind != "log_example", "config: log-regularity sweeps a mollifiable family, not log_example");
      require(f.eps.size() >= 2, "config: log-regularity needs at least two eps levels");
      require(f.k > 0.0, "config: log-regularity needs k > 0");
      require_reach(f, GridSpec(2, c.points, 0.75 * L));
      require_reach(FamilySpec{"mollified_disk", f.k, f.eps, std::nullopt, 1.0}, GridSpec(2, 32, 5.0));
      require(c.points >= 32, "config: log-regularity needs N >= 32");
      unused(c.beta, "beta");
      unused(c.p, "p");
      unused(c.k_sweep, "k_sweep");
      break;
    case Suite::apriori_sweep:
      require(c.alpha.size() == 1, "config: apriori-sweep needs exactly one alpha");
      require(!c.p.empty(), "config: apriori-sweep needs at least one p");
      for (double p : c.p) require(p < 2.0 / c.alpha[0], "config: apriori-sweep needs p < 2/alpha");
      require(f.kind != "log_example" || f.k > 0.0, "config: log_example needs k > 0");
      require(c.points >= 32, "config: apriori-sweep needs N >= 32");
      require(L >= 3.6, "config: apriori-sweep needs L >= 3.6 for the right-hand side bump");
      require_reach(f, GridSpec(2, c.points, L));
      require_reach(f, GridSpec(2, 2 * c.points, L));
      unused(c.beta, "beta");
      unused(c.k_sweep, "k_sweep");
      break;
    case Suite::vmo_example:
      require(f.kind == "log_example", "config: vmo-example uses the log_example family");
      require(f.k > 0.0, "config: log_example needs k > 0");
      require(L >= 1.0 && c.points >= 64, "config: vmo-example needs L >= 1 and N >= 64");
      require_reach(f, GridSpec(2, c.points, L));
      unused(c.alpha, "alpha");
      unused(c.beta, "beta");
      unused(c.p, "p");
      unused(c.k_sweep, "k_sweep");
      break;
  }
}

ExperimentConfig parse_config(const json& doc, std::optional<Suite> suite_override) {
  reject_unknown(doc, {"suite", "grid", "family", "params", "tolerances", "seed", "output_dir"}, "config");
  std::optional<Suite> suite = suite_override;
  if (!suite) {
    require(doc.contains("suite"), "config: 'suite' is required");
    const auto name = get_checked<std::string>(doc, "suite");
    suite = parse_suite(name);
    require(suite.has_value(), "config: unknown suite '" + name + "'");
  } else if (doc.contains("suite")) {
    require(parse_suite(get_checked<std::string>(doc, "suite")).has_value(), "config: unknown suite in file");
  }
  ExperimentConfig c = default_config(*suite);
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    reject_unknown(g, {"points", "half_width"}, "grid");
    if (g.contains("points")) c.points = get_checked<int>(g, "points");
    if (g.contains("half_width")) c.half_width = get_checked<double>(g, "half_width");
  }
  if (doc.contains("family")) {
    const auto& f = doc["family"];
    reject_unknown(f, {"kind", "k", "eps", "seed", "radius"}, "family");
    if (f.contains("kind")) {
      const auto kind = get_checked<std::string>(f, "kind");
      if (kind != c.family.kind) c.family = FamilySpec{kind, c.family.k, {}, std::nullopt, 1.0};
    }
    if (f.contains("k")) c.family.k = get_checked<double>(f, "k");
    if (f.contains("eps")) c.family.eps = get_checked<std::vector<double>>(f, "eps");
    if (f.contains("seed")) c.family.seed = get_checked<std::uint64_t>(f, "seed");
    if (f.contains("radius")) c.family.radius = get_checked<double>(f, "radius");
  }
  if (doc.contains("params")) {
    const auto& p = doc["params"];
    reject_unknown(p, {"alpha", "beta", "p", "k_sweep"}, "params");
    if (p.contains("alpha")) c.alpha = get_checked<std::vector<double>>(p, "alpha");
    if (p.contains("beta")) c.beta = get_checked<std::vector<double>>(p, "beta");
    if (p.contains("p")) c.p = get_checked<std::vector<double>>(p, "p");
    if (p.contains("k_sweep")) c.k_sweep = get_checked<std::vector<double>>(p, "k_sweep");
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    reject_unknown(t, {"solver_tol", "max_iter", "krylov_threshold", "restart"}, "tolerances");
    if (t.contains("solver_tol")) c.solver.tol = get_checked<double>(t, "solver_tol");
    if (t.contains("max_iter")) c.solver.max_iter = get_checked<int>(t, "max_iter");
    if (t.contains("krylov_threshold")) c.solver.krylov_threshold = get_checked<double>(t, "krylov_threshold");
    if (t.contains("restart")) c.solver.restart = get_checked<int>(t, "restart");
  }
  if (doc.contains("seed")) c.seed = get_checked<std::uint64_t>(doc, "seed");
  if (doc.contains("output_dir")) c.output_dir = get_checked<std::string>(doc, "output_dir");
  validate(c);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json family = {{"kind", c.family.kind}, {"k", c.family.k}, {"eps", c.family.eps}, {"radius", c.family.radius}};
  if (c.family.seed) family["seed"] = *c.family.seed;
  return {{"suite", suite_name(c.suite)},
          {"grid", {{"points", c.points}, {"half_width", c.half_width}}},
          {"family", family},
          {"params", {{"alpha", c.alpha}, {"beta", c.beta}, {"p", c.p}, {"k_sweep", c.k_sweep}}},
          {"tolerances",
           {{"solver_tol", c.solver.tol},
            {"max_iter", c.solver.max_iter},
            {"krylov_threshold", c.solver.krylov_threshold},
            {"restart", c.solver.restart}}},
          {"seed", c.seed},
          {"output_dir", c.output_dir.string()}};
}

std::vector<BeltramiCoefficient> generate_family(const FamilySpec& family, const GridSpec& grid) {
  if (!(family.k >= 0.0 && family.k < 1.0)) throw std::invalid_argument("generate_family: k must lie in [0,1)");
  if (grid.dim() != 2) throw std::invalid_argument("generate_family: coefficients are planar");
  auto base = [&]() -> ComplexField {
    if (family.kind == "smooth_bump") return families::smooth_bump(grid, family.k, family.radius);
    if (family.kind == "tent") return families::tent(grid, family.k, family.radius);
    if (family.kind == "log_example")
      return family.k == 0.0 ? ComplexField(grid) : families::log_example(grid, family.k);
    if (family.kind == "random_bandlimited") {
      if (!family.seed) throw std::invalid_argument("generate_family: random_bandlimited needs a seed");
      return families::random_bandlimited(grid, family.k, *family.seed, family.radius);
    }
    throw std::invalid_argument("generate_family: unknown kind '" + family.kind + "'");
  };
  std::vector<BeltramiCoefficient> out;
  if (family.kind == "mollified_disk") {
    const std::vector<double> eps = family.eps.empty() ? std::vector<double>{4.0 * grid.spacing()} : family.eps;
    for (double e : eps) out.push_back(BeltramiCoefficient::make(families::mollified_disk(grid, family.k, e, family.radius)));
    return out;
  }
  const auto f = base();
  if (family.eps.empty()) {
    out.push_back(BeltramiCoefficient::make(f));
    return out;
  }
  for (double e : family.eps) out.push_back(BeltramiCoefficient::make(families::mollify(f, e)));
  return out;
}

bool SuiteResult::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

CriterionResult run_criterion(int id, const ExperimentConfig& config, SuiteResult* sink) {
  const auto ids = suite_criteria(config.suite);
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw std::invalid_argument("criterion " + std::to_string(id) + " does not belong to suite " +
                                suite_name(config.suite));
  switch (id) {
    case 1: return criterion_identities(config, sink);
    case 2: return criterion_pv_oracle(config, sink);
    case 3: return criterion_riesz_constant(config, sink);
    case 4: return criterion_kpv(config, sink);
    case 5: return criterion_frechet_kolmogorov(config, sink);
    case 6: return criterion_rank_fingerprint(config, sink);
    case 7: return criterion_disk_oracle(config, sink);
    case 8: return criterion_log_derivative(config, sink);
    case 9: return criterion_apriori(config, sink);
    case 10: return criterion_vmo(config, sink);
    case 11: return criterion_t_mu(config, sink);
  }
  throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
}

SuiteResult run_suite(const ExperimentConfig& config) {
  validate(config);
  SuiteResult result{config.suite, to_json(config), {}, {}, {}};
  for (int id : suite_criteria(config.suite)) result.criteria.push_back(run_criterion(id, config, &result));
  return result;
}

void emit_report(const SuiteResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("emit_report: cannot create " + dir.string());
  json doc = {{"suite", suite_name(result.suite)}, {"config", result.config}, {"passed", result.passed()}};
  json criteria = json::array();
  for (const auto& c : result.criteria)
    criteria.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"summary", c.summary},
                        {"details", c.details}});
  doc["criteria"] = criteria;
  json files = json::array();
  for (const auto& t : result.curves) {
    write_csv(dir / (t.name + ".csv"), t);
    files.push_back(t.name + ".csv");
  }
  for (const auto& [name, field] : result.fields) {
    write_cfld(dir / (name + ".cfld"), field);
    files.push_back(name + ".cfld");
  }
  doc["files"] = files;
  write_json(dir / (suite_name(result.suite) + ".json"), doc);
}

}  // namespace fraclab
