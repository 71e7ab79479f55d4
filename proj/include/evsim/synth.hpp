#pragma once

#include "evsim/consumption.hpp"
#include "evsim/emissions.hpp"

#include <cstdint>
#include <filesystem>

namespace evsim::synth {

/// Knobs for the synthetic household generator.
struct ConsumptionSpec {
    std::size_t households = 126;
    int year = 2019;
    std::uint64_t seed = 2019;
    double commuter_share = 0.7;
};

/// Commuters show an idle night, a morning peak, a low day and an evening
/// return; the rest have flat days that never clear the significance
/// threshold. Winter-heavy seasonality, kWh rounded to 3 decimals.
ConsumptionDataset consumption(const ConsumptionSpec& spec);

struct IntensitySpec {
    int first_year = 2017;
    int last_year = 2020;
    std::uint64_t seed = 2017;
    int step_minutes = 60; ///< 60 or 5
};

/// Rounded to 2 decimals.
std::vector<emissions::IntensitySample> intensity(const IntensitySpec& spec);

void write_intensity_csv(const std::filesystem::path& path, std::span<const emissions::IntensitySample> samples);

} // namespace evsim::synth
