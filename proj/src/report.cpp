#include "fraclab/report.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace fraclab {

using nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

json to_json(const SolveReport& r) {
  return {{"iterations", r.iterations},           {"residual_curve", r.residual_curve},
          {"contraction_estimate", r.contraction_estimate}, {"final_residual", r.final_residual},
          {"converged", r.converged},             {"method", r.method}};
}

json to_json(const KernelBound& r) {
  return {{"A_estimate", r.estimate}, {"A_bound", r.bound}, {"constant", r.constant},
          {"grad_sup", r.grad_sup},   {"b_sup", r.b_sup}};
}

json to_json(const TailCurve& r) {
  return {{"radii", r.radii}, {"norms", r.norms}, {"envelope", r.envelope}, {"envelope_slope", r.envelope_slope}};
}

json to_json(const TranslateCurve& r) {
  return {{"shifts", r.shifts},
          {"values", r.values},
          {"c_fractional", r.c_fractional},
          {"c_linear", r.c_linear},
          {"max_relative_misfit", r.max_relative_misfit}};
}

json to_json(const ModulusCurve& r) {
  return {{"scales", r.scales}, {"per_scale", r.per_scale}, {"modulus", r.modulus}};
}

json to_json(const NormReport& r) {
  json j = {{"lp", r.lp}, {"homogeneous", r.homogeneous}, {"full", r.full}, {"bmo", r.bmo}, {"vmo_modulus", to_json(r.vmo)}};
  j["gagliardo"] = r.gagliardo ? json(*r.gagliardo) : json(nullptr);
  return j;
}

json to_json(const AprioriReport& r) {
  return {{"alpha", r.alpha},           {"p", r.p}, {"input_norm", r.input_norm}, {"output_norm", r.output_norm},
          {"ratio", r.ratio},           {"solve", to_json(r.solve)}};
}

json to_json(const CompactnessReport& r) {
  return {{"A", to_json(r.a)},
          {"tail_curve", to_json(r.tail)},
          {"translate_curve", to_json(r.translate)},
          {"sv_decay", to_std(r.sv_decay)},
          {"kpv_ratios", r.kpv_ratios}};
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (table.header.size() != table.columns.size()) throw std::invalid_argument("write_csv: header/column mismatch");
  std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& c : table.columns)
    if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
  out << '\n' << std::setprecision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c][r];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << doc << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace fraclab
