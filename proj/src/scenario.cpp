#include "evsim/scenario.hpp"

#include "evsim/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <future>
#include <iterator>
#include <set>

namespace evsim::scenario {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class ConfigReader {
public:
    explicit ConfigReader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        throw InputError(origin_, 0, (key.empty() ? "" : "'" + key + "': ") + message);
    }

    void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) const
    {
        if (!obj.is_object()) {
            fail(where, "expected an object");
        }
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, v] : obj.items()) {
            if (!ok.count(k)) {
                fail(where.empty() ? k : where + "." + k, "unknown key");
            }
        }
    }

    template <typename T>
    T get(const json& obj, const char* key, const std::string& where, T fallback) const
    {
        if (!obj.contains(key)) {
            return fallback;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            fail(where.empty() ? key : where + "." + key, "wrong type");
        }
    }

    template <typename T>
    T require(const json& obj, const char* key, const std::string& where) const
    {
        if (!obj.contains(key)) {
            fail(where.empty() ? key : where + "." + key, "required");
        }
        return get<T>(obj, key, where, T{});
    }

    Hour time(const json& obj, const char* key, Hour fallback) const
    {
        if (!obj.contains(key)) {
            return fallback;
        }
        try {
            return parse_hour(obj.at(key).get<std::string>());
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    }

    driving::HourWindow window(const json& obj, const char* key, driving::HourWindow fallback) const
    {
        if (!obj.contains(key)) {
            return fallback;
        }
        const auto& w = obj.at(key);
        if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer()) {
            fail(std::string("driving.") + key, "expected [first_hour, last_hour]");
        }
        return {w[0].get<int>(), w[1].get<int>()};
    }

private:
    std::string origin_;
};

fs::path resolve(const fs::path& base, const std::string& p)
{
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text, const fs::path& base_dir, const std::string& origin)
{
    const ConfigReader r(origin);
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        r.fail("", std::string("invalid JSON: ") + e.what());
    }
    r.only_keys(root, "",
                {"schema_version", "name", "seed", "sim_start", "hard_end", "adoption", "inputs", "grid",
                 "household_power_limit_kw", "driving", "emissions", "report_year"});
    const int version = r.require<int>(root, "schema_version", "");
    if (version != kSchemaVersion) {
        r.fail("schema_version", "unsupported version " + std::to_string(version));
    }

    ScenarioConfig cfg;
    cfg.source = origin;
    auto& p = cfg.params;
    p.name = r.get<std::string>(root, "name", "", p.name);
    p.seed = r.get<std::uint64_t>(root, "seed", "", p.seed);
    p.sim_start = r.time(root, "sim_start", p.sim_start);
    p.hard_end = r.time(root, "hard_end", p.hard_end);
    p.report_year = r.get<int>(root, "report_year", "", p.report_year);
    cfg.household_power_limit_kw = r.get<double>(root, "household_power_limit_kw", "", cfg.household_power_limit_kw);

    const json adoption = root.value("adoption", json::object());
    r.only_keys(adoption, "adoption",
                {"mode", "preset", "curve_csv", "scope", "logistic", "first_year", "last_year", "national_fleet"});
    try {
        p.mode = adoption::parse_mode(r.get<std::string>(adoption, "mode", "adoption", "poisson"));
    } catch (const ValidationError& e) {
        r.fail("adoption.mode", e.what());
    }
    auto& curve = cfg.curve;
    curve.first_year = r.get<int>(adoption, "first_year", "adoption", curve.first_year);
    curve.last_year = r.get<int>(adoption, "last_year", "adoption", curve.last_year);
    curve.national_fleet = r.get<double>(adoption, "national_fleet", "adoption", curve.national_fleet);
    const int sources = int(adoption.contains("preset")) + int(adoption.contains("curve_csv")) +
                        int(adoption.contains("logistic"));
    if (sources > 1) {
        r.fail("adoption", "give only one of preset, curve_csv, logistic");
    }
    if (adoption.contains("curve_csv")) {
        curve.kind = CurveSpec::Kind::csv;
        curve.csv_path = resolve(base_dir, r.require<std::string>(adoption, "curve_csv", "adoption"));
        const auto scope = r.get<std::string>(adoption, "scope", "adoption", "local");
        if (scope != "local" && scope != "national") {
            r.fail("adoption.scope", "expected local or national");
        }
        curve.national = scope == "national";
    } else if (adoption.contains("logistic")) {
        curve.kind = CurveSpec::Kind::logistic;
        const auto& l = adoption.at("logistic");
        r.only_keys(l, "adoption.logistic", {"A", "P0", "r", "t0_year"});
        curve.logistic = {r.require<double>(l, "A", "adoption.logistic"), r.require<double>(l, "P0", "adoption.logistic"),
                          r.require<double>(l, "r", "adoption.logistic"), r.require<int>(l, "t0_year", "adoption.logistic")};
        try {
            curve.logistic.validate();
        } catch (const ValidationError& e) {
            r.fail("adoption.logistic", e.what());
        }
    } else {
        curve.kind = CurveSpec::Kind::preset;
        curve.preset = r.get<std::string>(adoption, "preset", "adoption", curve.preset);
        if (curve.preset != "historical" && curve.preset != "1m" && curve.preset != "775k") {
            r.fail("adoption.preset", "unknown preset '" + curve.preset + "'");
        }
    }
    if (curve.first_year > curve.last_year) {
        r.fail("adoption", "first_year must not exceed last_year");
    }

    const json inputs = root.value("inputs", json::object());
    r.only_keys(inputs, "inputs", {"catalog", "consumption", "intensity", "distances"});
    cfg.consumption = resolve(base_dir, r.require<std::string>(inputs, "consumption", "inputs"));
    cfg.intensity = resolve(base_dir, r.require<std::string>(inputs, "intensity", "inputs"));
    if (inputs.contains("catalog")) {
        cfg.catalog = resolve(base_dir, r.require<std::string>(inputs, "catalog", "inputs"));
    }
    if (inputs.contains("distances")) {
        cfg.distances = resolve(base_dir, r.require<std::string>(inputs, "distances", "inputs"));
    }

    const json grid = root.value("grid", json::object());
    r.only_keys(grid, "grid", {"transformer_capacity_kw"});
    p.transformer_capacity_kw = r.get<double>(grid, "transformer_capacity_kw", "grid", p.transformer_capacity_kw);

    const json driving = root.value("driving", json::object());
    r.only_keys(driving, "driving", {"departure_window", "arrival_window", "significance_factor"});
    p.departure_window = r.window(driving, "departure_window", p.departure_window);
    p.arrival_window = r.window(driving, "arrival_window", p.arrival_window);
    p.significance_factor = r.get<double>(driving, "significance_factor", "driving", p.significance_factor);

    const json em = root.value("emissions", json::object());
    r.only_keys(em, "emissions", {"decay_mode", "decay_rate"});
    try {
        p.decay.mode = emissions::parse_decay_mode(r.get<std::string>(em, "decay_mode", "emissions", "continuous"));
    } catch (const ValidationError& e) {
        r.fail("emissions.decay_mode", e.what());
    }
    p.decay.rate = r.get<double>(em, "decay_rate", "emissions", p.decay.rate);

    try {
        p.validate();
    } catch (const ValidationError& e) {
        r.fail("", e.what());
    }
    return cfg;
}

ScenarioConfig parse_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError(path.string(), 0, "cannot open scenario file");
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto cfg = parse_config_text(text, path.parent_path(), path.string());
    cfg.source = path;
    return cfg;
}

driving::DistanceDistribution default_distances()
{
    return driving::DistanceDistribution({{5, 0.10},
                                          {10, 0.12},
                                          {20, 0.18},
                                          {30, 0.17},
                                          {40, 0.13},
                                          {50, 0.10},
                                          {70, 0.10},
                                          {100, 0.07},
                                          {150, 0.03}});
}

adoption::AdoptionCurve resolve_curve(const CurveSpec& spec, std::int64_t households)
{
    adoption::AdoptionCurve curve;
    switch (spec.kind) {
    case CurveSpec::Kind::preset:
        curve = adoption::preset_national_curve(spec.preset, spec.first_year, spec.last_year);
        break;
    case CurveSpec::Kind::logistic:
        curve = adoption::tabulate(spec.logistic, spec.first_year, spec.last_year);
        break;
    case CurveSpec::Kind::csv:
        curve = adoption::load_curve_csv(spec.csv_path);
        break;
    }
    curve.validate();
    if (spec.kind != CurveSpec::Kind::csv || spec.national) {
        return adoption::scale_curve_to_grid(curve, spec.national_fleet, households);
    }
    for (auto& row : curve.yearly_counts) {
        row.count = std::min(row.count, households);
    }
    return curve;
}

engine::SimulationInputs load_inputs(const ScenarioConfig& config)
{
    auto catalog = config.catalog ? fleet::load_catalog(*config.catalog, config.household_power_limit_kw)
                                  : fleet::Catalog(fleet::default_models(), config.household_power_limit_kw);
    auto consumption = load_consumption(config.consumption);
    auto intensity = emissions::load_intensity_csv(config.intensity);
    auto distances = config.distances ? driving::load_distances(*config.distances) : default_distances();
    auto curve = resolve_curve(config.curve, std::int64_t(consumption.households()));
    return engine::SimulationInputs{std::move(catalog), std::move(consumption), std::move(intensity.series),
                                    std::move(distances), std::move(curve)};
}

engine::SimulationResult run_scenario(const ScenarioConfig& config, const engine::RunHooks& hooks)
{
    const auto inputs = load_inputs(config);
    return engine::run(config.params, inputs, hooks);
}

ComparisonRow comparison_row(const engine::SimulationResult& r)
{
    ComparisonRow row;
    row.name = r.params.name;
    if (r.first_overload) {
        row.first_overload = r.first_overload->time;
        row.overloads_following_year = r.following_year.count_following_year;
        row.days_with_overload = r.following_year.days_with_overload;
        row.evs_at_first_overload = r.evs_at_first_overload;
    }
    row.avg_kg_per_ev_report_year = r.avg_kg_per_ev_report_year;
    for (const auto& y : r.evs_end_of_year) {
        if (y.year == r.params.report_year - 1) {
            row.evs_before_report_year = y.count;
        }
    }
    return row;
}

std::vector<engine::SimulationResult> compare_scenarios(const std::vector<ScenarioConfig>& configs)
{
    if (configs.empty()) {
        throw ValidationError("compare needs at least one scenario");
    }
    for (const auto& c : configs) {
        if (c.params.seed != configs.front().params.seed) {
            throw ValidationError("compared scenarios must share a seed ('" + c.params.name + "' differs)");
        }
        if (c.params.mode != adoption::RealizationMode::deterministic) {
            throw ValidationError("compared scenarios must use deterministic adoption ('" + c.params.name + "')");
        }
    }
    std::vector<std::future<engine::SimulationResult>> runs;
    for (const auto& c : configs) {
        runs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
    }
    std::vector<engine::SimulationResult> results;
    for (auto& f : runs) {
        results.push_back(f.get());
    }
    return results;
}

} // namespace evsim::scenario
