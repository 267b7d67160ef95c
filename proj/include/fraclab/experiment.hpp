#pragma once

#include "fraclab/beltrami.hpp"
#include "fraclab/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fraclab {

enum class Suite { verify_operators, commutator_suite, solve, log_regularity, apriori_sweep, vmo_example };

std::optional<Suite> parse_suite(std::string_view name);
std::string suite_name(Suite suite);
/// Acceptance criteria (1..11) checked by a suite.
std::vector<int> suite_criteria(Suite suite);
Suite suite_of_criterion(int id);

/// Thrown for every invalid configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilySpec {
  std::string kind = "smooth_bump";  ///< smooth_bump, mollified_disk, log_example, random_bandlimited, tent
  double k = 0.5;
  std::vector<double> eps;  ///< mollification scales; one coefficient per entry
  std::optional<std::uint64_t> seed;
  double radius = 1.0;
};

struct ExperimentConfig {
  Suite suite = Suite::verify_operators;
  /// Base grid (points per axis, half width); each suite derives its grids from it.
  int points = 256;
  double half_width = 4.0;
  FamilySpec family;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> p;
  std::vector<double> k_sweep;  ///< ellipticity bounds for the residual-bound study
  SolveOptions solver;
  std::uint64_t seed = 20240601;
  std::filesystem::path output_dir = "fraclab-out";
};

/// Defaults reproduce the acceptance settings of the suite.
ExperimentConfig default_config(Suite suite);

/// Reads a JSON document on top of default_config(suite). Unknown keys,
/// out-of-range values and missing seeds for random families throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<Suite> suite_override = std::nullopt);

/// Re-checks every field; run_suite calls it before computing anything.
void validate(const ExperimentConfig& config);

/// One BeltramiCoefficient per eps (or a single one when eps is empty).
std::vector<BeltramiCoefficient> generate_family(const FamilySpec& family, const GridSpec& grid);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;
  nlohmann::json details;
};

struct SuiteResult {
  Suite suite;
  nlohmann::json config;
  std::vector<CriterionResult> criteria;
  std::vector<CsvTable> curves;
  std::vector<std::pair<std::string, ComplexField>> fields;

  bool passed() const;
};

/// Runs one acceptance criterion with the settings in `config`; curves and
/// fields it produces are appended to `sink` when given.
CriterionResult run_criterion(int id, const ExperimentConfig& config, SuiteResult* sink = nullptr);

SuiteResult run_suite(const ExperimentConfig& config);

/// Writes <suite>.json, one CSV per curve and one CFLD1 dump per field into
/// `dir` (created if needed); overwrites previous files.
void emit_report(const SuiteResult& result, const std::filesystem::path& dir);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace fraclab
