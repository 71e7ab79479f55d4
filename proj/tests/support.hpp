#pragma once

#include "evsim/engine.hpp"
#include "evsim/rng.hpp"
#include "evsim/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path source_data() { return EVSIM_SOURCE_DATA_DIR; }
inline std::filesystem::path build_data() { return EVSIM_BUILD_DATA_DIR; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("evsim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
}

/// Hooks that check per-hour bounds on every simulated hour. Violations are
/// collected instead of thrown so the engine always finishes.
struct BoundsChecker {
    std::vector<std::string> violations;
    long hours_checked = 0;

    evsim::engine::RunHooks hooks()
    {
        return {[this](const evsim::engine::HourSnapshot& s) {
            ++hours_checked;
            for (std::size_t e = 0; e < s.evs.size(); ++e) {
                const auto& ev = s.evs[e];
                const double cap = model_capacity(ev);
                if (ev.soc_kwh < 0.0 || ev.soc_kwh > cap + 1e-9) {
                    violations.push_back("soc out of range at " + evsim::format_hour(s.time));
                }
                if (s.ev_load_kw[e] < 0.0 || s.ev_load_kw[e] > s.ev_power_kw[e] + 1e-12) {
                    violations.push_back("charging load above effective power at " + evsim::format_hour(s.time));
                }
            }
            if (std::abs(s.load.total_kw - (s.load.baseline_kw + s.load.charging_kw)) > 1e-9) {
                violations.push_back("inconsistent aggregate at " + evsim::format_hour(s.time));
            }
        }};
    }

    const evsim::fleet::Catalog* catalog = nullptr;

    double model_capacity(const evsim::fleet::EvState& ev) const
    {
        return catalog ? catalog->model(ev.model).battery_capacity_kwh : 1e300;
    }
};

/// Checks the ratio bounds on a finished run.
inline std::vector<std::string> result_bounds(const evsim::engine::SimulationResult& r)
{
    std::vector<std::string> bad;
    if (r.load_factor_first_overload_day && !(*r.load_factor_first_overload_day > 0.0 && *r.load_factor_first_overload_day <= 1.0)) {
        bad.push_back("load factor outside (0, 1]");
    }
    if (r.coincidence_factor_year_after &&
        !(*r.coincidence_factor_year_after > 0.0 && *r.coincidence_factor_year_after <= 1.0 + 1e-12)) {
        bad.push_back("coincidence factor outside (0, 1]");
    }
    for (const auto& ev : r.final_evs) {
        if (ev.soc_kwh < 0.0) {
            bad.push_back("negative final soc");
        }
    }
    return bad;
}

/// Runs with bounds checking attached; throws if any bound is violated.
inline evsim::engine::SimulationResult checked_run(const evsim::engine::SimulationParams& params,
                                                   const evsim::engine::SimulationInputs& inputs)
{
    BoundsChecker checker;
    checker.catalog = &inputs.catalog;
    auto result = evsim::engine::run(params, inputs, checker.hooks());
    auto bad = result_bounds(result);
    bad.insert(bad.end(), checker.violations.begin(), checker.violations.end());
    if (!bad.empty()) {
        throw std::logic_error("bound violated: " + bad.front());
    }
    return result;
}

/// Small synthetic inputs built in memory.
struct TinyWorld {
    int households = 3;
    int year = 2019;
    double flat_kw = 0.5;
    std::vector<evsim::adoption::YearCount> curve{{2019, 0}, {2020, 1}};
    std::vector<evsim::fleet::EvModel> models{{"Test", 40.0, 0.2, 10.0, 1.0}};
    std::vector<evsim::driving::DistanceDistribution::Bin> distances{{30.0, 1.0}};
    double intensity_g = 100.0;

    evsim::engine::SimulationInputs build() const
    {
        evsim::ConsumptionDataset data;
        data.year = year;
        for (int h = 0; h < households; ++h) {
            data.household_ids.push_back("h" + std::to_string(h));
            data.kwh.emplace_back(std::size_t(evsim::hours_in_year(year)), flat_kw);
        }
        std::vector<evsim::emissions::HourlyMean> hours;
        const auto start = evsim::make_hour(year, 1, 1);
        for (int h = 0; h < evsim::hours_in_year(year); ++h) {
            hours.push_back({start + std::chrono::hours{h}, intensity_g, 1});
        }
        evsim::adoption::AdoptionCurve c;
        c.yearly_counts = curve;
        return {evsim::fleet::Catalog(models), std::move(data), evsim::emissions::EmissionSeries::from_hourly(hours),
                evsim::driving::DistanceDistribution(distances), c};
    }
};

/// Random commuter-ish consumption with `households` rows for one year.
inline evsim::ConsumptionDataset random_consumption(evsim::Rng& rng, int households, int year = 2019)
{
    evsim::ConsumptionDataset data;
    data.year = year;
    for (int h = 0; h < households; ++h) {
        data.household_ids.push_back("r" + std::to_string(h));
        const double idle = 0.1 + 0.5 * rng.uniform01();
        const bool flat = rng.uniform01() < 0.3;
        std::vector<double> v;
        for (int i = 0; i < evsim::hours_in_year(year); ++i) {
            const int hod = i % 24;
            double level = 1.0;
            if (!flat && hod >= 6) {
                level = hod == 6 ? 2.5 : hod < 17 ? 1.0 : hod <= 21 ? 3.5 : 1.4;
            }
            v.push_back(idle * level * (0.9 + 0.2 * rng.uniform01()));
        }
        data.kwh.push_back(std::move(v));
    }
    return data;
}

} // namespace testsupport
