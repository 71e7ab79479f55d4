#pragma once

#include "evsim/timeutil.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evsim::emissions {

/// Exponential reduction coefficient of the grid emission factor, per year.
inline constexpr double kDecayRate = 0.203;

struct IntensitySample {
    Minute time{};
    double g_per_kwh = 0.0;
};

struct HourlyMean {
    Hour time{};
    double g_per_kwh = 0.0;
    int samples = 0;
};

/// Groups samples by clock hour and averages them, in chronological order.
std::vector<HourlyMean> hourly_means(std::span<const IntensitySample> samples);

/// Hourly CO2-eq intensity over whole calendar years, g/kWh.
class EmissionSeries {
public:
    /// Hours must be consecutive and span complete calendar years.
    static EmissionSeries from_hourly(std::span<const HourlyMean> hours);

    int first_year() const noexcept { return first_year_; }
    int span_years() const noexcept { return int(years_.size()); }

    double value(int year, unsigned month, unsigned day, unsigned hour) const;

    /// Source value for a simulated hour: the simulated year's offset from
    /// `sim_start` is wrapped into the source span and month/day/hour kept.
    double base_at(Hour sim_time, Hour sim_start) const;

    const std::vector<double>& year_values(int offset) const { return years_.at(std::size_t(offset)); }

private:
    int first_year_ = 0;
    std::vector<std::vector<double>> years_;
};

struct HourlyConversion {
    EmissionSeries series;
    int partial_hours = 0;   ///< hours averaged from fewer than 12 samples
    int samples_per_hour = 1; ///< detected resolution: 12 for 5-minute, 1 for hourly
    std::vector<std::string> diagnostics;
};

/// Samples must be aligned to the 5-minute grid. Throws ValidationError on
/// empty input or gaps of whole hours.
HourlyConversion to_hourly(std::span<const IntensitySample> samples);

/// CSV with header `timestamp,co2_g_per_kwh`, 5-minute or hourly.
HourlyConversion load_intensity_csv(const std::filesystem::path& path);

enum class DecayMode { continuous, stepwise, none };

DecayMode parse_decay_mode(const std::string& text);
std::string to_string(DecayMode mode);

struct DecayModel {
    DecayMode mode = DecayMode::continuous;
    double rate = kDecayRate;
};

double decay_factor(double elapsed_years, double rate = kDecayRate);

/// Continuous: elapsed hours / 8766. Stepwise: whole calendar years.
double elapsed_years(Hour sim_time, Hour sim_start, DecayMode mode);

double intensity_at(const EmissionSeries& series, Hour sim_time, Hour sim_start, const DecayModel& decay = {});

struct EmissionRecord {
    int ev_id = 0;
    Hour time{};
    double energy_kwh = 0.0;
    double intensity_g_per_kwh = 0.0;
    double emitted_kg = 0.0;
};

struct EmissionLedger {
    std::vector<EmissionRecord> records;

    double total_kg() const;
    double total_energy_kwh() const;
};

/// Intensity is already decay-scaled.
void record_charge_emission(EmissionLedger& ledger, int ev_id, Hour hour, double energy_kwh, double intensity);

/// Total kg emitted during calendar `year` divided by `evs_present`.
double annual_per_ev_average(const EmissionLedger& ledger, int year, std::int64_t evs_present);

struct Ownership {
    int ev_id = 0;
    Hour adopted{};
};

struct AnnualRow {
    int year = 0;
    std::int64_t evs_present = 0;
    double total_kg = 0.0;
    std::optional<double> avg_kg_per_ev;
    bool complete = false;
};

struct AnnualReport {
    std::vector<AnnualRow> years;
    /// kg per (ev_id, year); EVs present with no charging appear with 0.
    std::map<std::pair<int, int>, double> per_ev_year_kg;
    std::optional<double> mean_of_ev_means_kg;
    std::optional<double> pooled_mean_kg;
};

/// Yearly aggregation over the simulated window [sim_start, sim_end).
/// EVs adopted at any point in a year count towards that year.
AnnualReport annual_report(const EmissionLedger& ledger, std::span<const Ownership> evs, Hour sim_start, Hour sim_end);

void write_ledger_csv(const std::filesystem::path& path, const EmissionLedger& ledger);
EmissionLedger read_ledger_csv(const std::filesystem::path& path);

struct FleetProjectionInputs {
    double n_ev = 0.0;
    double ev_annual_kg = 0.0;
    double fleet_size = 0.0;
    double ice_annual_kg = 0.0;
    double emission_cap_kg = 0.0;

    void validate() const;
};

/// n_ev * ev + (fleet - n_ev) * ice, kg.
double fleet_projection(const FleetProjectionInputs& in);

/// Smallest EV count meeting the cap, clamped to [0, fleet]. Throws
/// std::domain_error when an all-EV fleet still exceeds the cap.
std::int64_t required_evs_for_cap(const FleetProjectionInputs& in);

} // namespace evsim::emissions
