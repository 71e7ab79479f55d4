#pragma once

#include "evsim/timeutil.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace evsim::grid {

struct GridConfig {
    double transformer_capacity_kw = 400.0;
    std::int64_t household_count = 0;

    void validate() const;
};

struct LoadEntry {
    double baseline_kw = 0.0;
    double charging_kw = 0.0;
    double total_kw = 0.0;
};

/// Sums household baselines and EV charging loads for one hour, each in
/// the order given; total = baseline sum + charging sum.
LoadEntry aggregate_load(std::span<const double> baselines_kw, std::span<const double> charging_kw);

/// Contiguous hourly transformer loading starting at `start`.
struct LoadTrace {
    Hour start{};
    std::vector<double> baseline_kw;
    std::vector<double> charging_kw;
    std::vector<double> total_kw;
    std::vector<int> charging_evs;

    std::size_t size() const noexcept { return total_kw.size(); }
    bool empty() const noexcept { return total_kw.empty(); }
    Hour time(std::size_t i) const { return start + std::chrono::hours{std::int64_t(i)}; }
    Hour end() const { return time(size()); }

    void push(const LoadEntry& entry, int evs_charging = 0);
};

struct OverloadEvent {
    Hour time{};
    double magnitude_kw = 0.0;
    double total_load_kw = 0.0;
    double charging_load_kw = 0.0;
    int simultaneous_charging_evs = 0;
};

/// One event per hour with total load strictly above capacity, in time order.
std::vector<OverloadEvent> detect_overloads(const LoadTrace& trace, double capacity_kw);

/// Half-open hour range [begin, end).
struct Period {
    Hour begin{};
    Hour end{};

    static Period day_of(Hour t);
    bool contains(Hour t) const { return t >= begin && t < end; }
};

/// Mean over max of total load within the period. Throws ValidationError
/// when the period has no samples or a zero peak.
double load_factor(const LoadTrace& trace, const Period& period);
double load_factor(std::span<const double> loads);

struct CoincidenceResult {
    double factor = 0.0;
    std::size_t consumers_used = 0;
    std::size_t consumers_excluded = 0; ///< zero-peak consumers dropped
};

/// Peak of the summed consumer traces over the sum of individual peaks.
/// All traces must have equal length. Throws ValidationError if no consumer
/// has a positive peak.
CoincidenceResult coincidence_factor(const std::vector<std::vector<double>>& consumer_loads);

struct OverloadStats {
    std::int64_t count_following_year = 0;
    std::int64_t days_with_overload = 0;

    bool operator==(const OverloadStats&) const = default;
};

/// Events in (first, first + 1 year] and the distinct calendar days among them.
OverloadStats overload_stats(std::span<const OverloadEvent> events, Hour first_overload);

/// CSV `timestamp,baseline_kw,charging_kw,total_kw,capacity_kw,overload_kw`.
void write_trace_csv(const std::filesystem::path& path, const LoadTrace& trace, double capacity_kw);

/// Reads a trace written by write_trace_csv; returns it with the capacity column's value.
LoadTrace read_trace_csv(const std::filesystem::path& path, double* capacity_kw = nullptr);

} // namespace evsim::grid
