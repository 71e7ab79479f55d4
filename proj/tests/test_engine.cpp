#include "evsim/csv.hpp"
#include "evsim/engine.hpp"
#include "evsim/errors.hpp"
#include "evsim/report.hpp"
#include "evsim/scenario.hpp"

#include "support.hpp"

#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

using namespace evsim;
namespace fs = std::filesystem;

namespace {

/// Commuter day: idle night, busy 6-7, quiet day, busy from 17.
/// Departure infers to 8 and arrival to 17.
ConsumptionDataset commuter_dataset(std::size_t households, int year = 2019)
{
    ConsumptionDataset data;
    data.year = year;
    for (std::size_t i = 0; i < households; ++i) {
        data.household_ids.push_back("c" + std::to_string(i));
        std::vector<double> v;
        for (int h = 0; h < hours_in_year(year); ++h) {
            const int hod = h % 24;
            v.push_back(hod == 6 || hod == 7 || hod >= 17 ? 0.9 : 0.3);
        }
        data.kwh.push_back(std::move(v));
    }
    return data;
}

std::string slurp(const fs::path& p) { return csv::read_file(p); }

} // namespace

TEST_CASE("stop time")
{
    CHECK(engine::stop_time(make_hour(2031, 10, 21, 16), make_hour(2040, 1, 1)) == make_hour(2032, 10, 21, 16));
    CHECK(engine::stop_time(std::nullopt, make_hour(2033, 1, 1)) == make_hour(2033, 1, 1));
    CHECK(engine::stop_time(make_hour(2032, 11, 1), make_hour(2033, 1, 1)) == make_hour(2033, 1, 1));
}

TEST_CASE("parameter validation")
{
    const auto in = testsupport::TinyWorld{}.build();
    engine::SimulationParams p;
    p.sim_start = make_hour(2020, 1, 1, 5);
    CHECK_THROWS_AS(engine::run(p, in), ValidationError);
    p = {};
    p.transformer_capacity_kw = 0.0;
    CHECK_THROWS_AS(engine::run(p, in), ValidationError);
    p = {};
    p.arrival_window = {8, 12};
    CHECK_THROWS_AS(engine::run(p, in), ValidationError);
    p = {};
    p.hard_end = p.sim_start;
    CHECK_THROWS_AS(engine::run(p, in), ValidationError);
}

TEST_CASE("without adoption the trace is the baseline sum")
{
    testsupport::TinyWorld w;
    w.curve = {{2019, 0}, {2020, 0}};
    Rng rng(3);
    auto in = w.build();
    in.consumption = testsupport::random_consumption(rng, 5);
    engine::SimulationParams p;
    p.hard_end = make_hour(2021, 1, 1);
    const auto r = testsupport::checked_run(p, in);
    REQUIRE(r.trace.size() == 8784);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto c = civil(r.trace.time(i));
        const auto idx = std::size_t(hour_index_in_year(2019, c.month, c.day, c.hour));
        double sum = 0.0;
        for (std::size_t h = 0; h < 5; ++h) {
            sum += in.consumption.kwh[h][idx];
        }
        REQUIRE(r.trace.total_kw[i] == sum);
        REQUIRE(r.trace.charging_kw[i] == 0.0);
    }
    CHECK(r.ledger.records.empty());
    CHECK_FALSE(r.first_overload.has_value());
    CHECK(r.stop_time == p.hard_end);
    CHECK(r.adoptions.empty());
}

TEST_CASE("single commuter hand trace")
{
    testsupport::TinyWorld w;
    auto in = w.build();
    in.consumption = commuter_dataset(1);
    engine::SimulationParams p;
    p.mode = adoption::RealizationMode::deterministic;
    p.hard_end = make_hour(2022, 1, 1);
    p.transformer_capacity_kw = 6.5;
    p.report_year = 2020;
    const auto r = testsupport::checked_run(p, in);

    // One adoption at hour 4392 of 2020, at full charge.
    REQUIRE(r.adoptions.size() == 1);
    CHECK(r.adoptions[0].time == make_hour(2020, 7, 2));
    CHECK(r.initial_fleet == 0);

    // Leaves at 8, returns at 17 having used 30 km * 0.2 kWh/km, recharges in one hour.
    const Hour first = make_hour(2020, 7, 2, 17);
    REQUIRE(r.first_overload.has_value());
    CHECK(r.first_overload->time == first);
    CHECK(r.first_overload->charging_load_kw == 6.0);
    CHECK(r.first_overload->total_load_kw == doctest::Approx(6.9).epsilon(1e-12));
    CHECK(r.first_overload->magnitude_kw == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(r.first_overload->simultaneous_charging_evs == 1);
    CHECK(r.evs_at_first_overload == 1);

    CHECK(r.stop_time == make_hour(2021, 7, 2, 17));
    CHECK(r.horizon_end == make_hour(2021, 7, 2, 18));
    CHECK(r.following_year == grid::OverloadStats{365, 365});
    CHECK(r.total_overload_hours == 366);
    CHECK(*r.load_factor_first_overload_day == doctest::Approx((0.3 * 15 + 0.9 * 9 + 6.0) / 24.0 / 6.9).epsilon(1e-12));
    CHECK(*r.coincidence_factor_year_after == 1.0);

    CHECK(r.total_charging_kwh == doctest::Approx(6.0 * 366).epsilon(1e-12));
    CHECK(r.total_trip_kwh == doctest::Approx(6.0 * 366).epsilon(1e-12));
    CHECK(r.infeasible_trips == 0);
    CHECK(r.sessions.size() == 366);
    for (const auto& s : r.sessions) {
        CHECK(s.hours == 1);
        CHECK(s.end == charging::SessionEnd::full);
        CHECK(hour_of_day(s.start) == 17);
    }

    // Each charge emits 6 kWh at 100 g/kWh scaled by the continuous decay.
    double expected = 0.0, expected_2020 = 0.0;
    REQUIRE(r.ledger.records.size() == 366);
    for (const auto& rec : r.ledger.records) {
        const double hours = double((rec.time - p.sim_start).count());
        const double kg = 6.0 * 100.0 * std::exp(-0.203 * hours / 8766.0) / 1000.0;
        CHECK(rec.emitted_kg == doctest::Approx(kg).epsilon(1e-12));
        expected += kg;
        expected_2020 += year_of(rec.time) == 2020 ? kg : 0.0;
    }
    CHECK(r.total_emitted_kg == doctest::Approx(expected).epsilon(1e-12));
    CHECK(*r.avg_kg_per_ev_report_year == doctest::Approx(expected_2020).epsilon(1e-12));
    CHECK(r.evs_end_of_year == std::vector<adoption::YearCount>{{2020, 1}, {2021, 1}});

    // Window holds the year after the first overload, excluding it.
    CHECK(r.window_start == first + std::chrono::hours{1});
    CHECK(r.window_loads.front().size() == 8760);
}

TEST_CASE("EV count never exceeds households")
{
    testsupport::TinyWorld w;
    w.households = 4;
    w.curve = {{2019, 2}, {2020, 30}, {2021, 60}};
    const auto in = w.build();
    for (const auto mode : {adoption::RealizationMode::poisson, adoption::RealizationMode::deterministic}) {
        engine::SimulationParams p;
        p.mode = mode;
        p.hard_end = make_hour(2022, 1, 1);
        p.transformer_capacity_kw = 1e6;
        const auto r = testsupport::checked_run(p, in);
        CHECK(r.adoptions.size() == 4);
        CHECK(r.initial_fleet == 2);
        std::set<std::size_t> households;
        for (const auto& a : r.adoptions) {
            households.insert(a.household);
        }
        CHECK(households.size() == 4);
    }
}

TEST_CASE("runs are deterministic")
{
    const auto cfg = scenario::parse_config(testsupport::source_data() / "fixture10" / "scenario.json");
    const auto inputs = scenario::load_inputs(cfg);
    const auto a = engine::run(cfg.params, inputs);
    const auto b = engine::run(cfg.params, inputs);
    CHECK(a.trace.total_kw == b.trace.total_kw);
    CHECK(a.trace.charging_kw == b.trace.charging_kw);
    REQUIRE(a.ledger.records.size() == b.ledger.records.size());
    for (std::size_t i = 0; i < a.ledger.records.size(); ++i) {
        REQUIRE(a.ledger.records[i].emitted_kg == b.ledger.records[i].emitted_kg);
        REQUIRE(a.ledger.records[i].time == b.ledger.records[i].time);
    }

    const auto da = testsupport::scratch_dir("det_a");
    const auto db = testsupport::scratch_dir("det_b");
    report::write_run_outputs(da, a, inputs.consumption.household_ids, inputs.catalog);
    report::write_run_outputs(db, b, inputs.consumption.household_ids, inputs.catalog);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(da)) {
        const auto other = db / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK_MESSAGE(slurp(entry.path()) == slurp(other), entry.path().filename().string());
        ++files;
    }
    CHECK(files >= 8);

    auto other_seed = cfg.params;
    other_seed.seed += 1;
    CHECK(engine::run(other_seed, inputs).trace.total_kw != a.trace.total_kw);
}

TEST_CASE("summary is recomputable from the exported files")
{
    const auto cfg = scenario::parse_config(testsupport::source_data() / "fixture10" / "scenario.json");
    const auto inputs = scenario::load_inputs(cfg);
    const auto r = engine::run(cfg.params, inputs);
    const auto dir = testsupport::scratch_dir("recompute");
    report::write_run_outputs(dir, r, inputs.consumption.household_ids, inputs.catalog);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    double cap = 0.0;
    const auto trace = grid::read_trace_csv(dir / "load_trace.csv", &cap);
    const auto ledger = emissions::read_ledger_csv(dir / "emission_ledger.csv");

    std::vector<std::pair<Hour, double>> overloads;
    double peak = -1.0, charged = 0.0;
    Hour peak_time{};
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.total_kw[i] > cap) {
            overloads.emplace_back(trace.time(i), trace.total_kw[i] - cap);
        }
        if (trace.total_kw[i] > peak) {
            peak = trace.total_kw[i];
            peak_time = trace.time(i);
        }
        charged += trace.charging_kw[i];
    }
    REQUIRE_FALSE(overloads.empty());
    const Hour first = overloads.front().first;
    CHECK(summary["first_overload"]["timestamp"] == format_hour(first));
    CHECK(std::abs(summary["first_overload"]["magnitude_kw"].get<double>() - overloads.front().second) < 1e-6);
    CHECK(summary["total_overload_hours"] == overloads.size());
    CHECK(std::abs(summary["peak_load_kw"].get<double>() - peak) < 1e-6);
    CHECK(summary["peak_load_time"] == format_hour(peak_time));
    CHECK(std::abs(summary["total_charging_kwh"].get<double>() - charged) < 1e-6);

    std::int64_t following = 0;
    std::set<std::int64_t> days;
    for (const auto& [t, m] : overloads) {
        if (t > first && t <= add_years(first, 1)) {
            ++following;
            days.insert(std::chrono::floor<std::chrono::days>(t).time_since_epoch().count());
        }
    }
    CHECK(summary["overloads_following_year"] == following);
    CHECK(summary["days_with_overload_following_year"] == days.size());

    double day_sum = 0.0, day_peak = 0.0;
    int day_hours = 0;
    const auto first_day = std::chrono::floor<std::chrono::days>(first);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (std::chrono::floor<std::chrono::days>(trace.time(i)) == first_day) {
            day_sum += trace.total_kw[i];
            day_peak = std::max(day_peak, trace.total_kw[i]);
            ++day_hours;
        }
    }
    CHECK(day_hours == 24);
    CHECK(std::abs(summary["load_factor_first_overload_day"].get<double>() - day_sum / day_hours / day_peak) < 1e-6);

    // Coincidence factor from the per-household window export.
    {
        std::vector<std::string> header{"timestamp"};
        header.insert(header.end(), inputs.consumption.household_ids.begin(), inputs.consumption.household_ids.end());
        csv::Reader reader(dir / "household_window.csv", header);
        std::vector<std::string_view> f;
        std::vector<double> peaks(inputs.consumption.households(), 0.0);
        double group_peak = 0.0;
        while (reader.next(f)) {
            double total = 0.0;
            for (std::size_t k = 1; k < f.size(); ++k) {
                const double v = reader.number(f[k], "load");
                peaks[k - 1] = std::max(peaks[k - 1], v);
                total += v;
            }
            group_peak = std::max(group_peak, total);
        }
        double peak_sum = 0.0;
        for (const double v : peaks) {
            peak_sum += v;
        }
        CHECK(std::abs(summary["coincidence_factor_year_after"].get<double>() - group_peak / peak_sum) < 1e-6);
    }

    // Adoptions and emissions.
    std::vector<Hour> adopted;
    {
        csv::Reader reader(dir / "adoptions.csv", {"ev_id", "household_id", "model", "timestamp"});
        std::vector<std::string_view> f;
        while (reader.next(f)) {
            adopted.push_back(parse_hour(f[3]));
        }
    }
    CHECK(summary["evs_at_first_overload"] == std::count_if(adopted.begin(), adopted.end(), [&](Hour t) { return t <= first; }));
    double emitted = 0.0, energy = 0.0, in_report_year = 0.0;
    const int ry = summary["report_year"].get<int>();
    for (const auto& rec : ledger.records) {
        emitted += rec.emitted_kg;
        energy += rec.energy_kwh;
        in_report_year += year_of(rec.time) == ry ? rec.emitted_kg : 0.0;
    }
    const auto present = std::count_if(adopted.begin(), adopted.end(), [&](Hour t) { return t < make_hour(ry + 1, 1, 1); });
    CHECK(std::abs(summary["total_emitted_kg"].get<double>() - emitted) < 1e-6);
    CHECK(std::abs(energy - charged) < 1e-6);
    CHECK(std::abs(summary["avg_kg_per_ev_report_year"].get<double>() - in_report_year / double(present)) < 1e-6);
}

TEST_CASE("fixture run matches the independently re-simulated golden summary")
{
    const auto cfg = scenario::parse_config(testsupport::source_data() / "fixture10" / "scenario.json");
    const auto summary = report::summary_json(scenario::run_scenario(cfg));
    const auto golden = nlohmann::json::parse(slurp(testsupport::source_data() / "golden" / "fixture10_summary.json"));
    CHECK(summary == golden);
    if (summary != golden) {
        MESSAGE(nlohmann::json::diff(golden, summary).dump(1));
    }
}

TEST_CASE("comparison of scenarios")
{
    const auto base = testsupport::source_data() / "fixture10";
    auto text = [](const std::string& name, const std::string& curve, std::uint64_t seed, const std::string& mode) {
        return R"({"schema_version": 1, "name": ")" + name + R"(", "seed": )" + std::to_string(seed) +
               R"(, "sim_start": "2020-01-01T00:00", "hard_end": "2024-01-01T00:00", "report_year": 2021,
                 "adoption": {"mode": ")" + mode + R"(", "curve_csv": ")" + curve + R"(", "scope": "local"},
                 "inputs": {"consumption": "consumption.csv", "intensity": "../intensity/hourly_2017_2020.csv"},
                 "grid": {"transformer_capacity_kw": 30}})";
    };
    const auto a = scenario::parse_config_text(text("a", "adoption.csv", 3, "deterministic"), base);
    const auto b = scenario::parse_config_text(text("b", "adoption.csv", 3, "deterministic"), base);
    const auto results = scenario::compare_scenarios({a, b, a});
    REQUIRE(results.size() == 3);
    const auto ra = scenario::comparison_row(results[0]);
    const auto rb = scenario::comparison_row(results[1]);
    CHECK(ra.name == "a");
    CHECK(rb.name == "b");
    CHECK(ra.first_overload == rb.first_overload);
    CHECK(ra.overloads_following_year == rb.overloads_following_year);
    CHECK(ra.avg_kg_per_ev_report_year == rb.avg_kg_per_ev_report_year);
    CHECK(results[0].trace.total_kw == results[2].trace.total_kw);

    const auto other_seed = scenario::parse_config_text(text("c", "adoption.csv", 4, "deterministic"), base);
    CHECK_THROWS_AS(scenario::compare_scenarios({a, other_seed}), ValidationError);
    const auto poisson = scenario::parse_config_text(text("d", "adoption.csv", 3, "poisson"), base);
    CHECK_THROWS_AS(scenario::compare_scenarios({a, poisson}), ValidationError);

    const auto rows = std::vector<scenario::ComparisonRow>{ra, rb};
    const auto doc = report::comparison_json(rows);
    CHECK(doc.size() == 2);
    const auto dir = testsupport::scratch_dir("compare");
    report::write_comparison_csv(dir / "c.csv", rows);
    const auto csv_text = slurp(dir / "c.csv");
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') == 3);
}

TEST_CASE("more adoption never delays the first overload")
{
    // B follows A up to a cut-off year and then stops growing, so B's EVs
    // are a prefix of A's with identical adoption hours.
    Rng gen(2024);
    for (int k = 0; k < 25; ++k) {
        testsupport::TinyWorld w;
        w.households = int(gen.uniform_int(2, 8));
        w.models = fleet::default_models();
        w.distances = {{10.0, 0.3}, {40.0, 0.5}, {90.0, 0.2}};
        auto in_a = w.build();
        in_a.consumption = testsupport::random_consumption(gen, w.households);
        std::vector<adoption::YearCount> counts{{2019, 0}};
        for (int y = 2020; y <= 2023; ++y) {
            counts.push_back({y, counts.back().count + gen.uniform_int(0, 3)});
        }
        const int cut = int(gen.uniform_int(2020, 2023));
        auto capped = counts;
        for (auto& c : capped) {
            if (c.year > cut) {
                c.count = counts[std::size_t(cut - 2019)].count;
            }
        }
        in_a.local_curve.yearly_counts = counts;
        auto in_b = in_a;
        in_b.local_curve.yearly_counts = capped;

        engine::SimulationParams p;
        p.mode = adoption::RealizationMode::deterministic;
        p.seed = gen.next();
        p.hard_end = make_hour(2024, 1, 1);
        double peak_base = 0.0;
        for (const auto& h : in_a.consumption.kwh) {
            peak_base += *std::max_element(h.begin(), h.end());
        }
        p.transformer_capacity_kw = peak_base + 11.0 * gen.uniform01() * w.households;
        const auto ra = testsupport::checked_run(p, in_a);
        const auto rb = testsupport::checked_run(p, in_b);
        const std::size_t common = std::min(ra.trace.size(), rb.trace.size());
        for (std::size_t i = 0; i < common; ++i) {
            REQUIRE(ra.trace.total_kw[i] >= rb.trace.total_kw[i] - 1e-12);
        }
        if (rb.first_overload) {
            REQUIRE(ra.first_overload.has_value());
            REQUIRE(ra.first_overload->time <= rb.first_overload->time);
        }
    }
}
