#include "evsim/adoption.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace evsim::adoption {

void LogisticParams::validate() const
{
    if (!(initial > 0.0)) {
        throw ValidationError("logistic initial population must be positive");
    }
    if (!(carrying_capacity > initial)) {
        throw ValidationError("logistic carrying capacity must exceed the initial population");
    }
    if (!(growth_rate > 0.0)) {
        throw ValidationError("logistic growth rate must be positive");
    }
}

LogisticParams historical_denmark() { return LogisticParams{2.5e6, 124.0, 0.526, 2011}; }

void AdoptionCurve::validate() const
{
    if (yearly_counts.empty()) {
        throw ValidationError("adoption curve has no rows");
    }
    for (std::size_t i = 0; i < yearly_counts.size(); ++i) {
        const auto& row = yearly_counts[i];
        if (row.count < 0) {
            throw ValidationError("adoption curve count is negative in " + std::to_string(row.year));
        }
        if (i > 0) {
            const auto& prev = yearly_counts[i - 1];
            if (row.year != prev.year + 1) {
                throw ValidationError("adoption curve years must be consecutive (" +
                                      std::to_string(prev.year) + " then " + std::to_string(row.year) + ")");
            }
            if (row.count < prev.count) {
                throw ValidationError("adoption curve decreases in " + std::to_string(row.year));
            }
        }
    }
}

std::int64_t AdoptionCurve::final_count() const
{
    return yearly_counts.empty() ? 0 : yearly_counts.back().count;
}

std::int64_t AdoptionCurve::count_at(int year) const
{
    if (yearly_counts.empty() || year < yearly_counts.front().year) {
        return 0;
    }
    if (year > yearly_counts.back().year) {
        return yearly_counts.back().count;
    }
    return yearly_counts[std::size_t(year - yearly_counts.front().year)].count;
}

RealizationMode parse_mode(const std::string& text)
{
    if (text == "poisson") {
        return RealizationMode::poisson;
    }
    if (text == "deterministic") {
        return RealizationMode::deterministic;
    }
    throw ValidationError("unknown adoption mode '" + text + "' (expected poisson or deterministic)");
}

std::string to_string(RealizationMode mode)
{
    return mode == RealizationMode::poisson ? "poisson" : "deterministic";
}

double logistic_population(double years, const LogisticParams& p)
{
    return p.carrying_capacity /
           (1.0 + (p.carrying_capacity / p.initial - 1.0) * std::exp(-p.growth_rate * years));
}

double fit_growth_rate(double initial, double carrying_capacity, double t_target, double target)
{
    if (!(initial > 0.0) || !(target > initial) || !(carrying_capacity > target)) {
        throw std::domain_error("growth-rate fit requires 0 < P0 < P_target < A");
    }
    if (!(t_target > 0.0)) {
        throw std::domain_error("growth-rate fit requires a positive target time");
    }
    const double ratio = (carrying_capacity / target - 1.0) / (carrying_capacity / initial - 1.0);
    return -std::log(ratio) / t_target;
}

AdoptionCurve tabulate(const LogisticParams& params, int first_year, int last_year)
{
    params.validate();
    AdoptionCurve curve;
    for (int y = first_year; y <= last_year; ++y) {
        const double p = logistic_population(double(y - params.t0_year), params);
        curve.yearly_counts.push_back({y, std::int64_t(std::floor(p + 0.5))});
    }
    return curve;
}

AdoptionCurve scale_curve_to_grid(const AdoptionCurve& national, double national_fleet,
                                  std::int64_t grid_households)
{
    if (grid_households < 1) {
        throw ValidationError("grid must have at least one household");
    }
    if (!(national_fleet > 0.0)) {
        throw ValidationError("national fleet must be positive");
    }
    AdoptionCurve local;
    std::int64_t running = 0;
    for (const auto& row : national.yearly_counts) {
        const double scaled = double(row.count) * double(grid_households) / national_fleet;
        auto count = std::int64_t(std::floor(scaled + 0.5));
        count = std::min(std::max(count, running), grid_households);
        running = count;
        local.yearly_counts.push_back({row.year, count});
    }
    return local;
}

std::vector<YearRate> yearly_adoption_rates(const AdoptionCurve& curve)
{
    std::vector<YearRate> rates;
    for (std::size_t i = 1; i < curve.yearly_counts.size(); ++i) {
        const auto& cur = curve.yearly_counts[i];
        rates.push_back({cur.year, std::max<std::int64_t>(0, cur.count - curve.yearly_counts[i - 1].count)});
    }
    return rates;
}

AdoptionSchedule realize_schedule(const std::vector<YearRate>& rates, RealizationMode mode, Rng& rng,
                                  std::int64_t max_events)
{
    AdoptionSchedule schedule;
    std::int64_t remaining = std::max<std::int64_t>(0, max_events);
    std::vector<char> taken;
    std::vector<int> hours;
    for (const auto& rate : rates) {
        const int year_hours = hours_in_year(rate.year);
        const Hour year_start = make_hour(rate.year, 1, 1);
        hours.clear();
        if (mode == RealizationMode::poisson) {
            const auto drawn = std::min<std::int64_t>(rng.poisson(double(rate.new_evs)), year_hours);
            taken.assign(std::size_t(year_hours), 0);
            while (std::int64_t(hours.size()) < drawn) {
                const auto h = int(rng.uniform_int(0, year_hours - 1));
                if (!taken[std::size_t(h)]) {
                    taken[std::size_t(h)] = 1;
                    hours.push_back(h);
                }
            }
            std::sort(hours.begin(), hours.end());
        } else {
            const std::int64_t n = std::min<std::int64_t>(rate.new_evs, year_hours);
            for (std::int64_t j = 0; j < n; ++j) {
                hours.push_back(int(((2 * j + 1) * year_hours) / (2 * n)));
            }
        }
        const auto keep = std::min<std::int64_t>(remaining, std::int64_t(hours.size()));
        for (std::int64_t j = 0; j < keep; ++j) {
            schedule.events.push_back(year_start + std::chrono::hours{hours[std::size_t(j)]});
        }
        remaining -= keep;
    }
    return schedule;
}

AdoptionSchedule realize_schedule(const std::vector<YearRate>& rates, RealizationMode mode,
                                  std::uint64_t seed, std::int64_t max_events)
{
    Rng rng(seed);
    return realize_schedule(rates, mode, rng, max_events);
}

AdoptionCurve preset_national_curve(const std::string& name, int first_year, int last_year)
{
    const LogisticParams hist = historical_denmark();
    if (name == "historical") {
        return tabulate(hist, first_year, last_year);
    }
    double target_2030 = 0.0;
    if (name == "1m") {
        target_2030 = 1.0e6;
    } else if (name == "775k") {
        target_2030 = 775000.0;
    } else {
        throw ValidationError("unknown adoption preset '" + name + "' (historical, 1m, 775k)");
    }
    // Same carrying capacity, anchored on the historical trajectory at first_year.
    LogisticParams params = hist;
    params.initial = logistic_population(double(first_year - hist.t0_year), hist);
    params.t0_year = first_year;
    params.growth_rate =
        fit_growth_rate(params.initial, params.carrying_capacity, double(2030 - first_year), target_2030);
    return tabulate(params, first_year, last_year);
}

AdoptionCurve load_curve_csv(const std::filesystem::path& path)
{
    csv::Reader reader(path, {"year", "cumulative_evs"});
    AdoptionCurve curve;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        const auto year = reader.integer(f[0], "year");
        const auto count = reader.integer(f[1], "cumulative_evs");
        if (count < 0) {
            reader.fail("cumulative_evs must be non-negative");
        }
        if (!curve.yearly_counts.empty()) {
            const auto& prev = curve.yearly_counts.back();
            if (year != prev.year + 1) {
                reader.fail("years must be consecutive");
            }
            if (count < prev.count) {
                reader.fail("cumulative_evs must be non-decreasing");
            }
        }
        curve.yearly_counts.push_back({int(year), count});
    }
    if (curve.yearly_counts.empty()) {
        throw InputError(path.string(), 0, "adoption curve has no rows");
    }
    return curve;
}

void write_curve_csv(const std::filesystem::path& path, const AdoptionCurve& curve)
{
    std::ofstream out(path);
    out << "year,cumulative_evs\n";
    for (const auto& row : curve.yearly_counts) {
        out << row.year << ',' << row.count << '\n';
    }
}

} // namespace evsim::adoption
