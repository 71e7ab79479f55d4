#pragma once

#include "evsim/adoption.hpp"
#include "evsim/charging.hpp"
#include "evsim/consumption.hpp"
#include "evsim/driving.hpp"
#include "evsim/emissions.hpp"
#include "evsim/fleet.hpp"
#include "evsim/grid.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evsim::engine {

struct SimulationParams {
    std::string name = "scenario";
    Hour sim_start = make_hour(2020, 1, 1);
    Hour hard_end = make_hour(2033, 1, 1);
    std::uint64_t seed = 1;
    adoption::RealizationMode mode = adoption::RealizationMode::poisson;
    double transformer_capacity_kw = 400.0;
    driving::HourWindow departure_window = driving::kDepartureWindow;
    driving::HourWindow arrival_window = driving::kArrivalWindow;
    double significance_factor = driving::kSignificanceFactor;
    emissions::DecayModel decay;
    int report_year = 2031;

    void validate() const;
};

struct SimulationInputs {
    fleet::Catalog catalog;
    ConsumptionDataset consumption;
    emissions::EmissionSeries intensity;
    driving::DistanceDistribution distances;
    adoption::AdoptionCurve local_curve; ///< already scaled to the grid
};

struct Adoption {
    int ev_id = 0;
    std::size_t household = 0;
    std::size_t model = 0;
    Hour time{};
};

struct SimulationResult {
    SimulationParams params;
    std::size_t households = 0;
    Hour stop_time{};
    Hour horizon_end{}; ///< exclusive end of the simulated hours

    std::optional<grid::OverloadEvent> first_overload;
    std::optional<std::int64_t> evs_at_first_overload;
    grid::OverloadStats following_year;
    std::int64_t total_overload_hours = 0;
    std::optional<double> load_factor_first_overload_day;
    std::optional<double> coincidence_factor_year_after;
    std::size_t coincidence_consumers_excluded = 0;

    std::int64_t initial_fleet = 0;
    std::vector<adoption::YearCount> evs_end_of_year;
    std::vector<std::pair<std::string, std::int64_t>> model_distribution_end;

    emissions::AnnualReport annual;
    std::optional<double> avg_kg_per_ev_report_year;

    double total_charging_kwh = 0.0;
    double total_trip_kwh = 0.0;
    double total_emitted_kg = 0.0;
    std::int64_t infeasible_trips = 0;
    double peak_load_kw = 0.0;
    Hour peak_load_time{};

    grid::LoadTrace trace;
    std::vector<grid::OverloadEvent> overloads;
    emissions::EmissionLedger ledger;
    std::vector<charging::ChargeSession> sessions;
    std::vector<Adoption> adoptions;
    std::vector<fleet::EvState> final_evs;

    /// Per-household loads over (first overload, first overload + 1 year].
    Hour window_start{};
    std::vector<std::vector<double>> window_loads;

    std::vector<std::string> diagnostics;
};

/// Read-only view of the engine state after each simulated hour.
struct HourSnapshot {
    Hour time{};
    std::span<const fleet::EvState> evs;
    std::span<const double> ev_power_kw;  ///< effective charging power, per EV
    std::span<const double> ev_load_kw;   ///< charging load this hour, per EV
    grid::LoadEntry load;
};

struct RunHooks {
    std::function<void(const HourSnapshot&)> on_hour;
};

/// first_overload + 1 year when that falls before hard_end, else hard_end.
Hour stop_time(std::optional<Hour> first_overload, Hour hard_end);

/// Hourly loop; see README for the within-hour order. Deterministic in
/// (params, inputs).
SimulationResult run(const SimulationParams& params, const SimulationInputs& inputs, const RunHooks& hooks = {});

} // namespace evsim::engine
