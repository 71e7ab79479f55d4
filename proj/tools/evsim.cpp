#include "evsim/adoption.hpp"
#include "evsim/emissions.hpp"
#include "evsim/errors.hpp"
#include "evsim/report.hpp"
#include "evsim/scenario.hpp"
#include "evsim/synth.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path default_out_dir()
{
    const char* env = std::getenv("EVSIM_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path("evsim_out");
}

std::string utc_now()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int fail(const std::string& kind, const std::string& message, const json& extra = json::object())
{
    json err = {{"error", kind}, {"message", message}};
    err.update(extra);
    std::cerr << err.dump() << '\n';
    return 2;
}

void run_one(const evsim::scenario::ScenarioConfig& config, const evsim::engine::SimulationResult& result,
             const evsim::engine::SimulationInputs& inputs, const fs::path& out, const evsim::report::ManifestTimes& times)
{
    evsim::report::write_run_outputs(out, result, inputs.consumption.household_ids, inputs.catalog);
    evsim::report::write_json(out / "manifest.json", evsim::report::manifest_json(config, times));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Residential EV charging simulator for a single low-voltage grid"};
    app.set_version_flag("--version", evsim::report::kToolVersion);
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Simulate one scenario and write results");
    fs::path run_config;
    std::optional<std::uint64_t> run_seed;
    fs::path run_out = default_out_dir();
    run->add_option("--config", run_config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", run_seed, "Override the scenario seed");
    run->add_option("--out", run_out, "Output directory (default: $EVSIM_OUT_DIR or ./evsim_out)");

    auto* compare = app.add_subcommand("compare", "Run scenarios that differ only in adoption curve");
    std::vector<fs::path> compare_configs;
    fs::path compare_out = default_out_dir();
    compare->add_option("--configs", compare_configs, "Scenario JSON files")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", compare_out, "Output directory (default: $EVSIM_OUT_DIR or ./evsim_out)");

    auto* project = app.add_subcommand("project", "Annual fleet emissions for a given EV count");
    evsim::emissions::FleetProjectionInputs proj;
    std::optional<double> proj_cap;
    bool proj_json = false;
    project->add_option("--evs", proj.n_ev, "Number of EVs")->required();
    project->add_option("--ev-kg", proj.ev_annual_kg, "Annual kg CO2-eq per EV")->required();
    project->add_option("--fleet", proj.fleet_size, "Total passenger-car fleet")->required();
    project->add_option("--ice-kg", proj.ice_annual_kg, "Annual kg CO2-eq per combustion car")->required();
    project->add_option("--cap", proj_cap, "Emission cap in kg; also reports the EV count needed to meet it");
    project->add_flag("--json", proj_json, "Print JSON instead of text");

    auto* fit = app.add_subcommand("fit", "Logistic growth rate through two points");
    double fit_p0 = 0, fit_a = 0, fit_t = 0, fit_pt = 0;
    fit->add_option("--p0", fit_p0, "Population at t = 0")->required();
    fit->add_option("--a", fit_a, "Carrying capacity")->required();
    fit->add_option("--t", fit_t, "Years from t = 0 to the target")->required();
    fit->add_option("--pt", fit_pt, "Population at the target")->required();

    auto* synth_c = app.add_subcommand("synth-consumption", "Write a synthetic household consumption CSV");
    evsim::synth::ConsumptionSpec cspec;
    fs::path synth_c_out;
    synth_c->add_option("--households", cspec.households, "Household count")->capture_default_str();
    synth_c->add_option("--year", cspec.year, "Calendar year")->capture_default_str();
    synth_c->add_option("--seed", cspec.seed, "Generator seed")->capture_default_str();
    synth_c->add_option("--commuter-share", cspec.commuter_share, "Share of commuting households")->capture_default_str();
    synth_c->add_option("--out", synth_c_out, "Output CSV")->required();

    auto* synth_i = app.add_subcommand("synth-intensity", "Write a synthetic CO2 intensity CSV");
    evsim::synth::IntensitySpec ispec;
    fs::path synth_i_out;
    synth_i->add_option("--first-year", ispec.first_year, "First calendar year")->capture_default_str();
    synth_i->add_option("--last-year", ispec.last_year, "Last calendar year")->capture_default_str();
    synth_i->add_option("--seed", ispec.seed, "Generator seed")->capture_default_str();
    synth_i->add_option("--step-minutes", ispec.step_minutes, "5 or 60")->capture_default_str();
    synth_i->add_option("--out", synth_i_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        return fail("usage", e.what());
    }

    try {
        if (*run) {
            auto config = evsim::scenario::parse_config(run_config);
            if (run_seed) {
                config.params.seed = *run_seed;
            }
            evsim::report::ManifestTimes times{utc_now(), {}, 0.0};
            const auto t0 = std::chrono::steady_clock::now();
            const auto inputs = evsim::scenario::load_inputs(config);
            const auto result = evsim::engine::run(config.params, inputs);
            times.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            times.finished_utc = utc_now();
            run_one(config, result, inputs, run_out, times);
            std::cout << evsim::report::summary_json(result).dump(2) << '\n';
        } else if (*compare) {
            std::vector<evsim::scenario::ScenarioConfig> configs;
            for (const auto& p : compare_configs) {
                configs.push_back(evsim::scenario::parse_config(p));
            }
            evsim::report::ManifestTimes times{utc_now(), {}, 0.0};
            const auto t0 = std::chrono::steady_clock::now();
            const auto results = evsim::scenario::compare_scenarios(configs);
            times.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            times.finished_utc = utc_now();
            std::vector<evsim::scenario::ComparisonRow> rows;
            fs::create_directories(compare_out);
            for (std::size_t i = 0; i < configs.size(); ++i) {
                rows.push_back(evsim::scenario::comparison_row(results[i]));
                const auto inputs = evsim::scenario::load_inputs(configs[i]);
                run_one(configs[i], results[i], inputs, compare_out / configs[i].params.name, times);
            }
            evsim::report::write_json(compare_out / "comparison.json", evsim::report::comparison_json(rows));
            evsim::report::write_comparison_csv(compare_out / "comparison.csv", rows);
            std::cout << evsim::report::comparison_json(rows).dump(2) << '\n';
        } else if (*project) {
            if (proj_cap) {
                proj.emission_cap_kg = *proj_cap;
            }
            const double kg = evsim::emissions::fleet_projection(proj);
            json out = {{"total_kg", kg}, {"total_mt", kg / 1e9}};
            std::optional<std::int64_t> needed;
            if (proj_cap) {
                needed = evsim::emissions::required_evs_for_cap(proj);
                out["required_evs"] = *needed;
            }
            if (proj_json) {
                std::cout << out.dump(2) << '\n';
            } else {
                std::printf("%.3f Mt\n", kg / 1e9);
                if (needed) {
                    std::printf("required EVs for cap: %lld\n", static_cast<long long>(*needed));
                }
            }
        } else if (*fit) {
            std::printf("%.6f\n", evsim::adoption::fit_growth_rate(fit_p0, fit_a, fit_t, fit_pt));
        } else if (*synth_c) {
            evsim::write_consumption_csv(synth_c_out, evsim::synth::consumption(cspec));
        } else if (*synth_i) {
            evsim::synth::write_intensity_csv(synth_i_out, evsim::synth::intensity(ispec));
        }
    } catch (const evsim::InputError& e) {
        return fail("input", e.detail(), {{"file", e.file()}, {"line", e.line()}});
    } catch (const std::invalid_argument& e) {
        return fail("validation", e.what());
    } catch (const std::domain_error& e) {
        return fail("domain", e.what());
    } catch (const std::exception& e) {
        return fail("runtime", e.what());
    }
    return 0;
}
