#include "evsim/report.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "evsim/plot.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace evsim::report {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
json opt(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError(path.string(), 0, "cannot write file");
    }
    return out;
}

} // namespace

json summary_json(const engine::SimulationResult& r)
{
    const auto& p = r.params;
    json doc;
    doc["schema_version"] = 1;
    doc["scenario"] = p.name;
    doc["seed"] = p.seed;
    doc["mode"] = adoption::to_string(p.mode);
    doc["sim_start"] = format_hour(p.sim_start);
    doc["hard_end"] = format_hour(p.hard_end);
    doc["stop_time"] = format_hour(r.stop_time);
    doc["horizon_end"] = format_hour(r.horizon_end);
    doc["households"] = r.households;
    doc["transformer_capacity_kw"] = p.transformer_capacity_kw;
    doc["initial_fleet"] = r.initial_fleet;
    doc["adoptions"] = r.adoptions.size();

    if (r.first_overload) {
        const auto& f = *r.first_overload;
        doc["first_overload"] = {{"timestamp", format_hour(f.time)},
                                 {"magnitude_kw", f.magnitude_kw},
                                 {"total_load_kw", f.total_load_kw},
                                 {"charging_load_kw", f.charging_load_kw},
                                 {"simultaneous_charging_evs", f.simultaneous_charging_evs}};
        doc["overloads_following_year"] = r.following_year.count_following_year;
        doc["days_with_overload_following_year"] = r.following_year.days_with_overload;
    } else {
        doc["first_overload"] = nullptr;
        doc["overloads_following_year"] = nullptr;
        doc["days_with_overload_following_year"] = nullptr;
    }
    doc["evs_at_first_overload"] = opt(r.evs_at_first_overload);
    doc["total_overload_hours"] = r.total_overload_hours;
    doc["load_factor_first_overload_day"] = opt(r.load_factor_first_overload_day);
    doc["coincidence_factor_year_after"] = opt(r.coincidence_factor_year_after);

    json years = json::array();
    for (const auto& y : r.evs_end_of_year) {
        years.push_back({{"year", y.year}, {"evs", y.count}});
    }
    doc["evs_end_of_year"] = years;

    json models = json::object();
    for (const auto& [name, n] : r.model_distribution_end) {
        models[name] = n;
    }
    doc["model_distribution_end"] = models;

    json annual = json::array();
    for (const auto& row : r.annual.years) {
        annual.push_back({{"year", row.year},
                          {"evs_present", row.evs_present},
                          {"total_kg", row.total_kg},
                          {"avg_kg_per_ev", opt(row.avg_kg_per_ev)},
                          {"complete", row.complete}});
    }
    doc["annual_emissions"] = annual;
    doc["report_year"] = p.report_year;
    doc["avg_kg_per_ev_report_year"] = opt(r.avg_kg_per_ev_report_year);
    doc["mean_of_ev_means_kg"] = opt(r.annual.mean_of_ev_means_kg);
    doc["pooled_mean_kg"] = opt(r.annual.pooled_mean_kg);

    doc["total_charging_kwh"] = r.total_charging_kwh;
    doc["total_trip_kwh"] = r.total_trip_kwh;
    doc["total_emitted_kg"] = r.total_emitted_kg;
    doc["infeasible_trips"] = r.infeasible_trips;
    doc["charge_sessions"] = r.sessions.size();
    doc["peak_load_kw"] = r.peak_load_kw;
    doc["peak_load_time"] = format_hour(r.peak_load_time);
    return doc;
}

json comparison_json(const std::vector<scenario::ComparisonRow>& rows)
{
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back({{"scenario", row.name},
                       {"first_overload", row.first_overload ? json(format_hour(*row.first_overload)) : json(nullptr)},
                       {"overloads_following_year", opt(row.overloads_following_year)},
                       {"days_with_overload", opt(row.days_with_overload)},
                       {"evs_at_first_overload", opt(row.evs_at_first_overload)},
                       {"avg_kg_per_ev_report_year", opt(row.avg_kg_per_ev_report_year)},
                       {"evs_before_report_year", row.evs_before_report_year}});
    }
    return out;
}

void write_comparison_csv(const fs::path& path, const std::vector<scenario::ComparisonRow>& rows)
{
    auto out = open_out(path);
    out << "scenario,first_overload,overloads_following_year,days_with_overload,evs_at_first_overload,"
           "avg_kg_per_ev_report_year,evs_before_report_year\n";
    auto cell = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& row : rows) {
        out << row.name << ',' << (row.first_overload ? format_hour(*row.first_overload) : "") << ','
            << cell(row.overloads_following_year) << ',' << cell(row.days_with_overload) << ','
            << cell(row.evs_at_first_overload) << ','
            << (row.avg_kg_per_ev_report_year ? csv::format_double(*row.avg_kg_per_ev_report_year) : "") << ','
            << row.evs_before_report_year << '\n';
    }
}

void write_json(const fs::path& path, const json& doc)
{
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

namespace {

void write_charts(const fs::path& dir, const engine::SimulationResult& r, const fleet::Catalog& catalog)
{
    const auto& trace = r.trace;
    const double cap = r.params.transformer_capacity_kw;
    auto slice = [&](Hour begin, Hour end, plot::LineChart& chart) {
        begin = std::max(begin, trace.start);
        end = std::min(end, trace.end());
        plot::Series total{"total load", {}, plot::palette(0)};
        plot::Series base{"baseline", {}, plot::palette(2)};
        plot::Series chg{"EV charging", {}, plot::palette(1)};
        for (Hour t = begin; t < end; t += std::chrono::hours{1}) {
            const auto i = std::size_t((t - trace.start).count());
            total.values.push_back(trace.total_kw[i]);
            base.values.push_back(trace.baseline_kw[i]);
            chg.values.push_back(trace.charging_kw[i]);
            chart.x_ticks.push_back(format_hour(t));
        }
        chart.series = {total, base, chg};
        chart.reference_line = cap;
        chart.reference_label = "capacity " + csv::format_double(cap) + " kW";
        chart.y_label = "kW";
    };

    const Hour focus = r.first_overload ? r.first_overload->time : r.peak_load_time;
    plot::LineChart day;
    day.title = r.first_overload ? "Grid load on the day of the first overload (" + format_date(day_of(focus)) + ")"
                                 : "Grid load on the peak day (no overload)";
    const auto period = grid::Period::day_of(focus);
    slice(period.begin, period.end, day);
    plot::write_svg(dir / "first_overload_day.svg", plot::render(day));

    plot::LineChart year;
    if (r.first_overload) {
        year.title = "Grid load the year after the first overload";
        slice(focus + std::chrono::hours{1}, add_years(focus, 1) + std::chrono::hours{1}, year);
    } else {
        year.title = "Grid load over the final simulated year (no overload)";
        slice(add_years(trace.end(), -1), trace.end(), year);
    }
    year.series.resize(1);
    plot::write_svg(dir / "year_after_overload.svg", plot::render(year));

    int year_shown = r.params.report_year;
    const bool has_year = std::any_of(r.annual.years.begin(), r.annual.years.end(),
                                      [&](const auto& row) { return row.year == year_shown; });
    if (!has_year && !r.annual.years.empty()) {
        year_shown = r.annual.years.back().year;
    }
    plot::BarChart bars;
    bars.title = "Annual CO2-eq emissions from charging per EV, " + std::to_string(year_shown);
    bars.y_label = "kg CO2-eq";
    const Hour next_year = make_hour(year_shown + 1, 1, 1);
    for (const auto& a : r.adoptions) {
        if (a.time >= next_year) {
            continue;
        }
        const auto it = r.annual.per_ev_year_kg.find({a.ev_id, year_shown});
        bars.labels.push_back(std::to_string(a.ev_id));
        bars.values.push_back(it == r.annual.per_ev_year_kg.end() ? 0.0 : it->second);
        bars.colors.push_back(plot::palette(a.model));
    }
    for (std::size_t m = 0; m < catalog.size(); ++m) {
        bars.legend.emplace_back(catalog.model(m).name, plot::palette(m));
    }
    plot::write_svg(dir / "annual_emissions.svg", plot::render(bars));
}

} // namespace

void write_run_outputs(const fs::path& dir, const engine::SimulationResult& r,
                       const std::vector<std::string>& household_ids, const fleet::Catalog& catalog)
{
    fs::create_directories(dir);
    write_json(dir / "summary.json", summary_json(r));
    grid::write_trace_csv(dir / "load_trace.csv", r.trace, r.params.transformer_capacity_kw);
    emissions::write_ledger_csv(dir / "emission_ledger.csv", r.ledger);

    {
        auto out = open_out(dir / "adoptions.csv");
        out << "ev_id,household_id,model,timestamp\n";
        for (const auto& a : r.adoptions) {
            out << a.ev_id << ',' << household_ids.at(a.household) << ',' << catalog.model(a.model).name << ','
                << format_hour(a.time) << '\n';
        }
    }
    {
        auto out = open_out(dir / "annual_emissions.csv");
        out << "year,ev_id,household_id,model,kg\n";
        for (const auto& [key, kg] : r.annual.per_ev_year_kg) {
            const auto& a = r.adoptions.at(std::size_t(key.first));
            out << key.second << ',' << key.first << ',' << household_ids.at(a.household) << ','
                << catalog.model(a.model).name << ',' << csv::format_double(kg) << '\n';
        }
    }
    if (!r.window_loads.empty() && !r.window_loads.front().empty()) {
        auto out = open_out(dir / "household_window.csv");
        out << "timestamp";
        for (const auto& id : household_ids) {
            out << ',' << id;
        }
        out << '\n';
        for (std::size_t k = 0; k < r.window_loads.front().size(); ++k) {
            out << format_hour(r.window_start + std::chrono::hours{std::int64_t(k)});
            for (const auto& loads : r.window_loads) {
                out << ',' << csv::format_double(loads[k]);
            }
            out << '\n';
        }
    }
    {
        json diag = json::array();
        for (const auto& d : r.diagnostics) {
            diag.push_back(d);
        }
        write_json(dir / "diagnostics.json", diag);
    }
    write_charts(dir, r, catalog);
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("SHA-256 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(csv::read_file(path)); }

json manifest_json(const scenario::ScenarioConfig& config, const ManifestTimes& times)
{
    json inputs = json::object();
    auto add = [&](const char* key, const std::optional<fs::path>& p) {
        if (p) {
            inputs[key] = {{"path", p->string()}, {"sha256", sha256_file(*p)}};
        } else {
            inputs[key] = {{"path", nullptr}, {"builtin", true}};
        }
    };
    add("consumption", config.consumption);
    add("intensity", config.intensity);
    add("catalog", config.catalog);
    add("distances", config.distances);
    if (config.curve.kind == scenario::CurveSpec::Kind::csv) {
        add("adoption_curve", config.curve.csv_path);
    }
    json doc;
    doc["tool"] = "evsim";
    doc["tool_version"] = kToolVersion;
    doc["config_path"] = config.source.string();
    doc["config_sha256"] = sha256_file(config.source);
    doc["inputs"] = inputs;
    doc["seed"] = config.params.seed;
    doc["started_utc"] = times.started_utc;
    doc["finished_utc"] = times.finished_utc;
    doc["wall_seconds"] = times.wall_seconds;
    return doc;
}

} // namespace evsim::report
