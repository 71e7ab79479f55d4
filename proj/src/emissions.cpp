#include "evsim/emissions.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace evsim::emissions {

using std::chrono::hours;

std::vector<HourlyMean> hourly_means(std::span<const IntensitySample> samples)
{
    std::map<Hour, std::pair<double, int>> buckets;
    for (const auto& s : samples) {
        auto& b = buckets[std::chrono::floor<hours>(s.time)];
        b.first += s.g_per_kwh;
        ++b.second;
    }
    std::vector<HourlyMean> out;
    out.reserve(buckets.size());
    for (const auto& [t, b] : buckets) {
        out.push_back({t, b.first / double(b.second), b.second});
    }
    return out;
}

EmissionSeries EmissionSeries::from_hourly(std::span<const HourlyMean> hourly)
{
    if (hourly.empty()) {
        throw ValidationError("intensity series is empty");
    }
    const Hour first = hourly.front().time;
    const auto c = civil(first);
    if (c.month != 1 || c.day != 1 || c.hour != 0) {
        throw ValidationError("intensity series must start at Jan 1 00:00, found " + format_hour(first));
    }
    EmissionSeries s;
    s.first_year_ = c.year;
    std::size_t i = 0;
    for (int year = c.year; i < hourly.size(); ++year) {
        const int n = hours_in_year(year);
        const Hour year_start = make_hour(year, 1, 1);
        std::vector<double> values(static_cast<std::size_t>(n));
        for (int h = 0; h < n; ++h, ++i) {
            const Hour expected = year_start + hours{h};
            if (i >= hourly.size() || hourly[i].time != expected) {
                throw ValidationError("intensity series must cover whole calendar years; missing " +
                                      format_hour(expected));
            }
            if (!(hourly[i].g_per_kwh >= 0.0)) {
                throw ValidationError("negative intensity at " + format_hour(expected));
            }
            values[std::size_t(h)] = hourly[i].g_per_kwh;
        }
        s.years_.push_back(std::move(values));
    }
    return s;
}

double EmissionSeries::value(int year, unsigned month, unsigned day, unsigned hour) const
{
    const auto& values = years_.at(std::size_t(year - first_year_));
    return values[std::size_t(hour_index_in_year(year, month, day, hour))];
}

double EmissionSeries::base_at(Hour sim_time, Hour sim_start) const
{
    const auto c = civil(sim_time);
    const int span = span_years();
    int offset = (c.year - year_of(sim_start)) % span;
    if (offset < 0) {
        offset += span;
    }
    return value(first_year_ + offset, c.month, c.day, c.hour);
}

HourlyConversion to_hourly(std::span<const IntensitySample> samples)
{
    if (samples.empty()) {
        throw ValidationError("intensity input is empty");
    }
    std::int64_t min_step = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].time.time_since_epoch().count() % 5 != 0) {
            throw ValidationError("intensity sample off the 5-minute grid");
        }
        if (i > 0) {
            const auto step = (samples[i].time - samples[i - 1].time).count();
            if (step > 0 && (min_step == 0 || step < min_step)) {
                min_step = step;
            }
        }
    }
    const int per_hour = (min_step == 0 || min_step >= 60) ? 1 : int(60 / min_step);
    const auto means = hourly_means(samples);
    HourlyConversion out{EmissionSeries::from_hourly(means), 0, per_hour, {}};
    for (const auto& m : means) {
        if (m.samples < per_hour) {
            if (++out.partial_hours <= 20) {
                out.diagnostics.push_back("partial hour " + format_hour(m.time) + ": " + std::to_string(m.samples) +
                                          " of " + std::to_string(per_hour) + " samples");
            }
        }
    }
    return out;
}

HourlyConversion load_intensity_csv(const std::filesystem::path& path)
{
    csv::Reader reader(path, {"timestamp", "co2_g_per_kwh"});
    std::vector<IntensitySample> samples;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        IntensitySample s;
        try {
            s.time = parse_minute(f[0]);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        s.g_per_kwh = reader.number(f[1], "co2_g_per_kwh");
        if (s.g_per_kwh < 0.0) {
            reader.fail("intensity must be non-negative");
        }
        if (!samples.empty() && s.time <= samples.back().time) {
            reader.fail("timestamps must be strictly increasing");
        }
        samples.push_back(s);
    }
    try {
        return to_hourly(samples);
    } catch (const ValidationError& e) {
        throw InputError(path.string(), 0, e.what());
    }
}

DecayMode parse_decay_mode(const std::string& text)
{
    if (text == "continuous") {
        return DecayMode::continuous;
    }
    if (text == "stepwise") {
        return DecayMode::stepwise;
    }
    if (text == "none") {
        return DecayMode::none;
    }
    throw ValidationError("unknown decay mode '" + text + "' (continuous, stepwise, none)");
}

std::string to_string(DecayMode mode)
{
    switch (mode) {
    case DecayMode::continuous:
        return "continuous";
    case DecayMode::stepwise:
        return "stepwise";
    case DecayMode::none:
        return "none";
    }
    return "unknown";
}

double decay_factor(double elapsed, double rate) { return std::exp(-rate * elapsed); }

double elapsed_years(Hour sim_time, Hour sim_start, DecayMode mode)
{
    switch (mode) {
    case DecayMode::continuous:
        return double((sim_time - sim_start).count()) / 8766.0;
    case DecayMode::stepwise:
        return double(year_of(sim_time) - year_of(sim_start));
    case DecayMode::none:
        return 0.0;
    }
    return 0.0;
}

double intensity_at(const EmissionSeries& series, Hour sim_time, Hour sim_start, const DecayModel& decay)
{
    const double base = series.base_at(sim_time, sim_start);
    if (decay.mode == DecayMode::none) {
        return base;
    }
    return base * decay_factor(elapsed_years(sim_time, sim_start, decay.mode), decay.rate);
}

double EmissionLedger::total_kg() const
{
    double sum = 0.0;
    for (const auto& r : records) {
        sum += r.emitted_kg;
    }
    return sum;
}

double EmissionLedger::total_energy_kwh() const
{
    double sum = 0.0;
    for (const auto& r : records) {
        sum += r.energy_kwh;
    }
    return sum;
}

void record_charge_emission(EmissionLedger& ledger, int ev_id, Hour hour, double energy_kwh, double intensity)
{
    ledger.records.push_back({ev_id, hour, energy_kwh, intensity, energy_kwh * intensity / 1000.0});
}

double annual_per_ev_average(const EmissionLedger& ledger, int year, std::int64_t evs_present)
{
    if (evs_present <= 0) {
        throw std::domain_error("annual average needs at least one EV present");
    }
    double total = 0.0;
    for (const auto& r : ledger.records) {
        if (year_of(r.time) == year) {
            total += r.emitted_kg;
        }
    }
    return total / double(evs_present);
}

AnnualReport annual_report(const EmissionLedger& ledger, std::span<const Ownership> evs, Hour sim_start, Hour sim_end)
{
    AnnualReport report;
    if (sim_end <= sim_start) {
        return report;
    }
    const int first_year = year_of(sim_start);
    const int last_year = year_of(sim_end - hours{1});
    std::vector<double> totals(std::size_t(last_year - first_year + 1), 0.0);
    for (const auto& r : ledger.records) {
        const int y = year_of(r.time);
        totals[std::size_t(y - first_year)] += r.emitted_kg;
        report.per_ev_year_kg[{r.ev_id, y}] += r.emitted_kg;
    }
    auto complete = [&](int y) { return make_hour(y, 1, 1) >= sim_start && make_hour(y + 1, 1, 1) <= sim_end; };
    double pooled_kg = 0.0;
    std::int64_t pooled_n = 0;
    for (int y = first_year; y <= last_year; ++y) {
        const Hour next_year = make_hour(y + 1, 1, 1);
        AnnualRow row;
        row.year = y;
        row.total_kg = totals[std::size_t(y - first_year)];
        row.complete = complete(y);
        for (const auto& ev : evs) {
            if (ev.adopted < next_year) {
                ++row.evs_present;
                report.per_ev_year_kg.try_emplace({ev.ev_id, y}, 0.0);
            }
        }
        if (row.evs_present > 0) {
            row.avg_kg_per_ev = row.total_kg / double(row.evs_present);
        }
        if (row.complete && row.evs_present > 0) {
            pooled_kg += row.total_kg;
            pooled_n += row.evs_present;
        }
        report.years.push_back(row);
    }
    if (pooled_n > 0) {
        report.pooled_mean_kg = pooled_kg / double(pooled_n);
    }
    double sum_of_means = 0.0;
    std::int64_t n_means = 0;
    for (const auto& ev : evs) {
        double sum = 0.0;
        int n = 0;
        for (int y = first_year; y <= last_year; ++y) {
            if (complete(y) && ev.adopted < make_hour(y + 1, 1, 1)) {
                sum += report.per_ev_year_kg.at({ev.ev_id, y});
                ++n;
            }
        }
        if (n > 0) {
            sum_of_means += sum / double(n);
            ++n_means;
        }
    }
    if (n_means > 0) {
        report.mean_of_ev_means_kg = sum_of_means / double(n_means);
    }
    return report;
}

void write_ledger_csv(const std::filesystem::path& path, const EmissionLedger& ledger)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    out << "ev_id,timestamp,energy_kwh,intensity_g_per_kwh,emitted_kg\n";
    for (const auto& r : ledger.records) {
        out << r.ev_id << ',' << format_hour(r.time) << ',' << csv::format_double(r.energy_kwh) << ','
            << csv::format_double(r.intensity_g_per_kwh) << ',' << csv::format_double(r.emitted_kg) << '\n';
    }
}

EmissionLedger read_ledger_csv(const std::filesystem::path& path)
{
    csv::Reader reader(path, {"ev_id", "timestamp", "energy_kwh", "intensity_g_per_kwh", "emitted_kg"});
    EmissionLedger ledger;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        EmissionRecord r;
        r.ev_id = int(reader.integer(f[0], "ev_id"));
        try {
            r.time = parse_hour(f[1]);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        r.energy_kwh = reader.number(f[2], "energy_kwh");
        r.intensity_g_per_kwh = reader.number(f[3], "intensity_g_per_kwh");
        r.emitted_kg = reader.number(f[4], "emitted_kg");
        ledger.records.push_back(r);
    }
    return ledger;
}

void FleetProjectionInputs::validate() const
{
    if (!(fleet_size > 0.0)) {
        throw ValidationError("fleet size must be positive");
    }
    if (n_ev < 0.0 || n_ev > fleet_size) {
        throw ValidationError("EV count must lie in [0, fleet size]");
    }
    if (!(ev_annual_kg >= 0.0) || !(ice_annual_kg > ev_annual_kg)) {
        throw ValidationError("need ice_annual_kg > ev_annual_kg >= 0");
    }
}

double fleet_projection(const FleetProjectionInputs& in)
{
    return in.n_ev * in.ev_annual_kg + (in.fleet_size - in.n_ev) * in.ice_annual_kg;
}

std::int64_t required_evs_for_cap(const FleetProjectionInputs& in)
{
    if (!(in.ice_annual_kg > in.ev_annual_kg)) {
        throw std::domain_error("EVs must emit less than combustion cars");
    }
    if (in.fleet_size * in.ev_annual_kg > in.emission_cap_kg) {
        throw std::domain_error("cap infeasible: an all-EV fleet still exceeds it");
    }
    const double needed =
        (in.fleet_size * in.ice_annual_kg - in.emission_cap_kg) / (in.ice_annual_kg - in.ev_annual_kg);
    const auto n = std::int64_t(std::ceil(needed));
    return std::clamp<std::int64_t>(n, 0, std::int64_t(std::floor(in.fleet_size)));
}

} // namespace evsim::emissions
