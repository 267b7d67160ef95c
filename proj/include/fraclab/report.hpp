#pragma once

#include "fraclab/beltrami.hpp"
#include "fraclab/commutator.hpp"
#include "fraclab/sobolev.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fraclab {

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const KernelBound& r);
nlohmann::json to_json(const TailCurve& r);
nlohmann::json to_json(const TranslateCurve& r);
nlohmann::json to_json(const ModulusCurve& r);
nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const AprioriReport& r);
nlohmann::json to_json(const CompactnessReport& r);

/// Plot-ready table: one column per header entry, equal lengths.
struct CsvTable {
  std::string name;  ///< file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace fraclab
