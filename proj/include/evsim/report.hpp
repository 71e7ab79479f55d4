#pragma once

#include "evsim/engine.hpp"
#include "evsim/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace evsim::report {

inline constexpr const char* kToolVersion = "1.0.0";

/// Summary document; every field is recomputable from the exported trace,
/// ledger and adoption table.
nlohmann::json summary_json(const engine::SimulationResult& result);

nlohmann::json comparison_json(const std::vector<scenario::ComparisonRow>& rows);
void write_comparison_csv(const std::filesystem::path& path, const std::vector<scenario::ComparisonRow>& rows);

/// summary.json, load_trace.csv, emission_ledger.csv, annual_emissions.csv,
/// adoptions.csv, household_window.csv (when an overload occurred) and the
/// three SVG charts. Excludes the manifest.
void write_run_outputs(const std::filesystem::path& dir, const engine::SimulationResult& result,
                       const std::vector<std::string>& household_ids, const fleet::Catalog& catalog);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestTimes {
    std::string started_utc;
    std::string finished_utc;
    double wall_seconds = 0.0;
};

nlohmann::json manifest_json(const scenario::ScenarioConfig& config, const ManifestTimes& times);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

} // namespace evsim::report
