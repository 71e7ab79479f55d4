#pragma once

#include "evsim/engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace evsim::scenario {

inline constexpr int kSchemaVersion = 1;

struct CurveSpec {
    enum class Kind { preset, csv, logistic };

    Kind kind = Kind::preset;
    std::string preset = "historical";
    std::filesystem::path csv_path;
    bool national = true; ///< scale by national_fleet before use
    adoption::LogisticParams logistic;
    int first_year = 2019;
    int last_year = 2040;
    double national_fleet = 2.5e6;
};

/// Parsed scenario file. Relative paths are resolved against the file's directory.
struct ScenarioConfig {
    std::filesystem::path source;
    engine::SimulationParams params;
    CurveSpec curve;
    std::optional<std::filesystem::path> catalog;   ///< built-in catalog when absent
    std::filesystem::path consumption;
    std::filesystem::path intensity;
    std::optional<std::filesystem::path> distances; ///< built-in synthetic distribution when absent
    double household_power_limit_kw = fleet::kDefaultHouseholdLimitKw;
};

ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir,
                                 const std::string& origin = "<inline>");

/// Synthetic daily-distance distribution (not survey data).
driving::DistanceDistribution default_distances();

/// Adoption curve for `spec`, scaled to `households` unless already local.
adoption::AdoptionCurve resolve_curve(const CurveSpec& spec, std::int64_t households);

engine::SimulationInputs load_inputs(const ScenarioConfig& config);

engine::SimulationResult run_scenario(const ScenarioConfig& config, const engine::RunHooks& hooks = {});

struct ComparisonRow {
    std::string name;
    std::optional<Hour> first_overload;
    std::optional<std::int64_t> overloads_following_year;
    std::optional<std::int64_t> days_with_overload;
    std::optional<std::int64_t> evs_at_first_overload;
    std::optional<double> avg_kg_per_ev_report_year;
    std::int64_t evs_before_report_year = 0;
};

ComparisonRow comparison_row(const engine::SimulationResult& result);

/// Runs scenarios that differ only in the adoption curve. Requires equal
/// seeds and deterministic realization; runs execute concurrently.
std::vector<engine::SimulationResult> compare_scenarios(const std::vector<ScenarioConfig>& configs);

} // namespace evsim::scenario
