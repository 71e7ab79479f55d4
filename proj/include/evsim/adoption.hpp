#pragma once

#include "evsim/rng.hpp"
#include "evsim/timeutil.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace evsim::adoption {

/// Parameters of the logistic (S-curve) adoption model
///   P(t) = A / (1 + (A / P0 - 1) * exp(-r t)).
struct LogisticParams {
    double carrying_capacity = 0.0; ///< A, vehicles
    double initial = 0.0;           ///< P0, vehicles at t = 0
    double growth_rate = 0.0;       ///< r, per year
    int t0_year = 0;                ///< calendar year at t = 0

    void validate() const;
};

/// Historical Danish extrapolation: 124 EVs in 2011, 2.5M cars, r = 52.6 %.
LogisticParams historical_denmark();

struct YearCount {
    int year = 0;
    std::int64_t count = 0;

    bool operator==(const YearCount&) const = default;
};

/// Cumulative EVs owned by the end of each calendar year.
struct AdoptionCurve {
    std::vector<YearCount> yearly_counts;

    /// Consecutive years, non-negative, non-decreasing.
    void validate() const;
    std::int64_t final_count() const;
    std::int64_t count_at(int year) const;
};

struct YearRate {
    int year = 0;
    std::int64_t new_evs = 0;

    bool operator==(const YearRate&) const = default;
};

enum class RealizationMode { poisson, deterministic };

RealizationMode parse_mode(const std::string& text);
std::string to_string(RealizationMode mode);

/// Strictly increasing hourly adoption instants.
struct AdoptionSchedule {
    std::vector<Hour> events;
};

double logistic_population(double years, const LogisticParams& params);

/// Growth rate through (0, P0) and (t_target, P_target). Throws
/// std::domain_error unless P0 < P_target < A and t_target > 0.
double fit_growth_rate(double initial, double carrying_capacity, double t_target, double target);

/// Samples P(year - t0) for each year in [first_year, last_year], rounded half up.
AdoptionCurve tabulate(const LogisticParams& params, int first_year, int last_year);

/// Proportional down-scaling of a national curve to a grid with
/// `grid_households` consumers; monotone and saturating at the household count.
AdoptionCurve scale_curve_to_grid(const AdoptionCurve& national, double national_fleet,
                                  std::int64_t grid_households);

/// First differences; the first row's count is pre-history and not a rate.
std::vector<YearRate> yearly_adoption_rates(const AdoptionCurve& curve);

/// Poisson: per-year count ~ Poisson(rate), placed on distinct uniformly
/// drawn hours of that year. Deterministic: exactly `rate` events, event j
/// of n at hour floor((2j + 1) * H / (2n)). Either way at most `max_events`
/// events are kept in total (earliest years first).
AdoptionSchedule realize_schedule(const std::vector<YearRate>& rates, RealizationMode mode, Rng& rng,
                                  std::int64_t max_events);
AdoptionSchedule realize_schedule(const std::vector<YearRate>& rates, RealizationMode mode,
                                  std::uint64_t seed, std::int64_t max_events);

/// Named national curves: "historical", "1m", "775k".
AdoptionCurve preset_national_curve(const std::string& name, int first_year = 2019, int last_year = 2040);

/// CSV with header `year,cumulative_evs`.
AdoptionCurve load_curve_csv(const std::filesystem::path& path);
void write_curve_csv(const std::filesystem::path& path, const AdoptionCurve& curve);

} // namespace evsim::adoption
