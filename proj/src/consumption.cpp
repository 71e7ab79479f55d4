#include "evsim/consumption.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "evsim/timeutil.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace evsim {

driving::DayProfile ConsumptionDataset::day_profile(std::size_t household, int day) const
{
    driving::DayProfile p{};
    const auto& row = kwh.at(household);
    std::copy_n(row.begin() + std::ptrdiff_t(day) * 24, 24, p.begin());
    return p;
}

void ConsumptionDataset::validate() const
{
    if (household_ids.empty()) {
        throw ValidationError("consumption dataset has no households");
    }
    const int n = hours_in_year(year);
    for (std::size_t i = 0; i < kwh.size(); ++i) {
        if (int(kwh[i].size()) != n) {
            throw ValidationError("household " + household_ids[i] + " does not cover a full year");
        }
        for (const double v : kwh[i]) {
            if (!(v >= 0.0)) {
                throw ValidationError("household " + household_ids[i] + " has a negative load");
            }
        }
    }
}

ConsumptionSummary summarize(const ConsumptionDataset& data)
{
    ConsumptionSummary s;
    s.households = data.households();
    s.hours = data.hours();
    std::vector<double> idles;
    for (std::size_t h = 0; h < data.households(); ++h) {
        double idle_sum = 0.0;
        for (int d = 0; d < data.days(); ++d) {
            idle_sum += driving::idle_load(data.day_profile(h, d));
        }
        idles.push_back(data.days() ? idle_sum / data.days() : 0.0);
        for (const double v : data.kwh[h]) {
            s.total_kwh += v;
        }
    }
    if (!idles.empty()) {
        std::sort(idles.begin(), idles.end());
        s.idle_min_kw = idles.front();
        s.idle_max_kw = idles.back();
        s.idle_median_kw = idles[idles.size() / 2];
    }
    return s;
}

ConsumptionDataset load_consumption(const std::filesystem::path& path)
{
    csv::Reader reader(path, {"household_id", "timestamp", "kwh"});
    ConsumptionDataset data;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<char>> seen;
    std::vector<std::string_view> f;
    int n_hours = 0;
    Hour year_start{};
    while (reader.next(f)) {
        Hour t;
        try {
            t = parse_hour(f[1]);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        if (data.household_ids.empty()) {
            data.year = year_of(t);
            n_hours = hours_in_year(data.year);
            year_start = make_hour(data.year, 1, 1);
        }
        if (year_of(t) != data.year) {
            reader.fail("timestamp " + format_hour(t) + " outside consumption year " + std::to_string(data.year));
        }
        const std::string id(f[0]);
        if (id.empty()) {
            reader.fail("empty household_id");
        }
        auto [it, inserted] = index.try_emplace(id, data.household_ids.size());
        if (inserted) {
            data.household_ids.push_back(id);
            data.kwh.emplace_back(std::size_t(n_hours), 0.0);
            seen.emplace_back(std::size_t(n_hours), 0);
        }
        const double v = reader.number(f[2], "kwh");
        if (!(v >= 0.0)) {
            reader.fail("negative consumption for household " + id + " at " + format_hour(t));
        }
        const auto h = std::size_t((t - year_start).count());
        if (seen[it->second][h]) {
            reader.fail("duplicate timestamp for household " + id + " at " + format_hour(t));
        }
        seen[it->second][h] = 1;
        data.kwh[it->second][h] = v;
    }
    if (data.household_ids.empty()) {
        throw InputError(path.string(), 0, "consumption file has no rows");
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        const auto missing = std::find(seen[i].begin(), seen[i].end(), char(0));
        if (missing != seen[i].end()) {
            const auto h = missing - seen[i].begin();
            throw InputError(path.string(), 0,
                             "household " + data.household_ids[i] + " is missing hour " + std::to_string(h) + " (" +
                                 format_hour(year_start + std::chrono::hours{h}) + ")");
        }
    }
    return data;
}

void write_consumption_csv(const std::filesystem::path& path, const ConsumptionDataset& data)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    out << "household_id,timestamp,kwh\n";
    const Hour start = make_hour(data.year, 1, 1);
    for (std::size_t i = 0; i < data.households(); ++i) {
        for (std::size_t h = 0; h < data.kwh[i].size(); ++h) {
            out << data.household_ids[i] << ',' << format_hour(start + std::chrono::hours{std::int64_t(h)}) << ','
                << csv::format_double(data.kwh[i][h]) << '\n';
        }
    }
}

} // namespace evsim
