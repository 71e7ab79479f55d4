#pragma once

#include "evsim/driving.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace evsim {

/// One calendar year of hourly household consumption (kWh per hour = kW).
struct ConsumptionDataset {
    int year = 0;
    std::vector<std::string> household_ids;
    std::vector<std::vector<double>> kwh; ///< [household][hour of year]

    std::size_t households() const noexcept { return household_ids.size(); }
    int hours() const noexcept { return kwh.empty() ? 0 : int(kwh.front().size()); }
    int days() const noexcept { return hours() / 24; }

    driving::DayProfile day_profile(std::size_t household, int day) const;
    void validate() const;
};

struct ConsumptionSummary {
    std::size_t households = 0;
    int hours = 0;
    double total_kwh = 0.0;
    double idle_min_kw = 0.0;
    double idle_median_kw = 0.0;
    double idle_max_kw = 0.0;
};

ConsumptionSummary summarize(const ConsumptionDataset& data);

/// CSV with header `household_id,timestamp,kwh`. Rejects missing hours,
/// duplicate timestamps and negative values, naming household and time.
ConsumptionDataset load_consumption(const std::filesystem::path& path);

void write_consumption_csv(const std::filesystem::path& path, const ConsumptionDataset& data);

} // namespace evsim
