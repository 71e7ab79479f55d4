#include "evsim/synth.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "evsim/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace evsim::synth {

namespace {

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

double noise(Rng& rng, double spread) { return 1.0 + spread * (2.0 * rng.uniform01() - 1.0); }

/// Winter peak around mid January.
double season(int day_of_year) { return 1.0 + 0.35 * std::cos(2.0 * std::numbers::pi * (day_of_year - 15) / 365.25); }

struct Household {
    double idle;
    double evening;
    bool commuter;
    int leave;
    int back;
};

} // namespace

ConsumptionDataset consumption(const ConsumptionSpec& spec)
{
    if (spec.households == 0 || spec.commuter_share < 0.0 || spec.commuter_share > 1.0) {
        throw ValidationError("synthetic consumption: need households > 0 and a share in [0, 1]");
    }
    Rng rng(spec.seed);
    ConsumptionDataset data;
    data.year = spec.year;
    const int days = hours_in_year(spec.year) / 24;
    const auto first_day = day_of(make_hour(spec.year, 1, 1));
    for (std::size_t h = 0; h < spec.households; ++h) {
        char id[16];
        std::snprintf(id, sizeof id, "H%03zu", h + 1);
        data.household_ids.emplace_back(id);

        Household hh{};
        hh.idle = 0.20 + 0.30 * rng.uniform01();
        hh.evening = 3.5 + 1.6 * rng.uniform01();
        hh.commuter = rng.uniform01() < spec.commuter_share;
        hh.leave = int(rng.uniform_int(6, 8));
        const double u = rng.uniform01();
        hh.back = u < 0.2 ? 16 : u < 0.85 ? 17 : 18;

        std::vector<double> series;
        series.reserve(std::size_t(days) * 24);
        for (int d = 0; d < days; ++d) {
            const std::chrono::weekday wd{first_day + std::chrono::days{d}};
            const bool workday = hh.commuter && wd.c_encoding() != 0 && wd.c_encoding() != 6;
            const double s = season(d);
            for (int hour = 0; hour < 24; ++hour) {
                double level = 1.0;
                if (hour < 6) {
                    level = 1.0;
                } else if (workday) {
                    if (hour == hh.leave - 1) {
                        level = 2.6;
                    } else if (hour < hh.back) {
                        level = hour < hh.leave - 1 ? 1.2 : 1.05;
                    } else if (hour <= 21) {
                        level = hh.evening;
                    } else {
                        level = hour == 22 ? 2.0 : 1.3;
                    }
                } else {
                    level = hour < 17 ? 1.35 : hour <= 21 ? 1.6 : 1.2;
                }
                series.push_back(round_to(hh.idle * s * level * noise(rng, 0.08), 1000.0));
            }
        }
        data.kwh.push_back(std::move(series));
    }
    return data;
}

std::vector<emissions::IntensitySample> intensity(const IntensitySpec& spec)
{
    if (spec.first_year > spec.last_year || (spec.step_minutes != 60 && spec.step_minutes != 5)) {
        throw ValidationError("synthetic intensity: need first_year <= last_year and a 5 or 60 minute step");
    }
    Rng rng(spec.seed);
    std::vector<emissions::IntensitySample> out;
    const Minute begin{make_hour(spec.first_year, 1, 1)};
    const Minute end{make_hour(spec.last_year + 1, 1, 1)};
    double wind = 0.0;
    for (Minute t = begin; t < end; t += std::chrono::minutes{spec.step_minutes}) {
        const Hour hour = std::chrono::floor<std::chrono::hours>(t);
        const int year = year_of(hour);
        const double base = 210.0 * std::pow(0.86, year - spec.first_year);
        const double daily = 1.0 + 0.18 * std::sin(2.0 * std::numbers::pi * (double(hour_of_day(hour)) - 11.0) / 24.0);
        const double winter = 1.0 + 0.15 * std::cos(2.0 * std::numbers::pi * hour_of_year(hour) / 8766.0);
        wind = 0.97 * wind + 0.06 * (2.0 * rng.uniform01() - 1.0);
        const double value = base * daily * winter * std::max(0.3, 1.0 + wind);
        out.push_back({t, round_to(value, 100.0)});
    }
    return out;
}

void write_intensity_csv(const std::filesystem::path& path, std::span<const emissions::IntensitySample> samples)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    out << "timestamp,co2_g_per_kwh\n";
    for (const auto& s : samples) {
        const auto h = std::chrono::floor<std::chrono::hours>(s.time);
        const auto m = (s.time - h).count();
        char buf[4];
        std::snprintf(buf, sizeof buf, "%02d", int(m));
        out << format_hour(h).substr(0, 14) << buf << ',' << csv::format_double(s.g_per_kwh) << '\n';
    }
}

} // namespace evsim::synth
