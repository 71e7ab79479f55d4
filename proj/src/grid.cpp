#include "evsim/grid.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace evsim::grid {

void GridConfig::validate() const
{
    if (!(transformer_capacity_kw > 0.0)) {
        throw ValidationError("transformer capacity must be positive");
    }
    if (household_count <= 0) {
        throw ValidationError("grid needs at least one household");
    }
}

LoadEntry aggregate_load(std::span<const double> baselines_kw, std::span<const double> charging_kw)
{
    LoadEntry e;
    for (const double b : baselines_kw) {
        e.baseline_kw += b;
    }
    for (const double c : charging_kw) {
        e.charging_kw += c;
    }
    e.total_kw = e.baseline_kw + e.charging_kw;
    return e;
}

void LoadTrace::push(const LoadEntry& entry, int evs_charging)
{
    baseline_kw.push_back(entry.baseline_kw);
    charging_kw.push_back(entry.charging_kw);
    total_kw.push_back(entry.total_kw);
    charging_evs.push_back(evs_charging);
}

std::vector<OverloadEvent> detect_overloads(const LoadTrace& trace, double capacity_kw)
{
    std::vector<OverloadEvent> events;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double total = trace.total_kw[i];
        if (total > capacity_kw) {
            const int evs = i < trace.charging_evs.size() ? trace.charging_evs[i] : 0;
            events.push_back({trace.time(i), total - capacity_kw, total, trace.charging_kw[i], evs});
        }
    }
    return events;
}

Period Period::day_of(Hour t)
{
    const Hour begin{std::chrono::floor<std::chrono::days>(t)};
    return {begin, begin + std::chrono::hours{24}};
}

double load_factor(std::span<const double> loads)
{
    if (loads.empty()) {
        throw ValidationError("load factor over an empty period");
    }
    double sum = 0.0;
    double peak = 0.0;
    for (const double l : loads) {
        sum += l;
        peak = std::max(peak, l);
    }
    if (!(peak > 0.0)) {
        throw ValidationError("load factor undefined for a zero peak");
    }
    return (sum / double(loads.size())) / peak;
}

double load_factor(const LoadTrace& trace, const Period& period)
{
    const Hour begin = std::max(period.begin, trace.start);
    const Hour end = std::min(period.end, trace.end());
    if (begin >= end) {
        throw ValidationError("load factor period does not overlap the trace");
    }
    const auto first = std::size_t((begin - trace.start).count());
    const auto n = std::size_t((end - begin).count());
    return load_factor(std::span<const double>(trace.total_kw).subspan(first, n));
}

CoincidenceResult coincidence_factor(const std::vector<std::vector<double>>& consumer_loads)
{
    CoincidenceResult r;
    std::vector<double> summed;
    double peak_sum = 0.0;
    for (const auto& loads : consumer_loads) {
        if (!summed.empty() && loads.size() != summed.size()) {
            throw ValidationError("consumer traces differ in length");
        }
        const double peak = loads.empty() ? 0.0 : *std::max_element(loads.begin(), loads.end());
        if (!(peak > 0.0)) {
            ++r.consumers_excluded;
            continue;
        }
        if (summed.empty()) {
            summed.assign(loads.size(), 0.0);
        }
        for (std::size_t i = 0; i < loads.size(); ++i) {
            summed[i] += loads[i];
        }
        peak_sum += peak;
        ++r.consumers_used;
    }
    if (r.consumers_used == 0) {
        throw ValidationError("coincidence factor needs a consumer with a positive peak");
    }
    r.factor = *std::max_element(summed.begin(), summed.end()) / peak_sum;
    return r;
}

OverloadStats overload_stats(std::span<const OverloadEvent> events, Hour first_overload)
{
    const Hour window_end = add_years(first_overload, 1);
    OverloadStats s;
    std::set<std::chrono::sys_days> days;
    for (const auto& e : events) {
        if (e.time > first_overload && e.time <= window_end) {
            ++s.count_following_year;
            days.insert(day_of(e.time));
        }
    }
    s.days_with_overload = std::int64_t(days.size());
    return s;
}

void write_trace_csv(const std::filesystem::path& path, const LoadTrace& trace, double capacity_kw)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    out << "timestamp,baseline_kw,charging_kw,total_kw,capacity_kw,overload_kw\n";
    const std::string cap = csv::format_double(capacity_kw);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double over = std::max(0.0, trace.total_kw[i] - capacity_kw);
        out << format_hour(trace.time(i)) << ',' << csv::format_double(trace.baseline_kw[i]) << ','
            << csv::format_double(trace.charging_kw[i]) << ',' << csv::format_double(trace.total_kw[i]) << ',' << cap
            << ',' << csv::format_double(over) << '\n';
    }
}

LoadTrace read_trace_csv(const std::filesystem::path& path, double* capacity_kw)
{
    csv::Reader reader(path, {"timestamp", "baseline_kw", "charging_kw", "total_kw", "capacity_kw", "overload_kw"});
    LoadTrace trace;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        Hour t;
        try {
            t = parse_hour(f[0]);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        if (trace.empty()) {
            trace.start = t;
        } else if (t != trace.end()) {
            reader.fail("trace timestamps must be consecutive hours");
        }
        LoadEntry e{reader.number(f[1], "baseline_kw"), reader.number(f[2], "charging_kw"),
                    reader.number(f[3], "total_kw")};
        trace.push(e, 0);
        if (capacity_kw) {
            *capacity_kw = reader.number(f[4], "capacity_kw");
        }
    }
    return trace;
}

} // namespace evsim::grid
