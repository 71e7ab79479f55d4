#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "evsim/plot.hpp"
#include "evsim/report.hpp"
#include "evsim/scenario.hpp"

#include "support.hpp"

#include "doctest.h"

#include <fstream>

using namespace evsim;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "name": "mini",
  "inputs": {"consumption": "c.csv", "intensity": "i.csv"}
})";

std::string with(const std::string& extra)
{
    return R"({"schema_version": 1, "inputs": {"consumption": "c.csv", "intensity": "i.csv"})" + extra + "}";
}

std::string error_of(const std::string& text)
{
    try {
        scenario::parse_config_text(text, "/base", "cfg.json");
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("minimal scenario uses defaults")
{
    const auto cfg = scenario::parse_config_text(kMinimal, "/base");
    CHECK(cfg.params.name == "mini");
    CHECK(cfg.params.transformer_capacity_kw == 400.0);
    CHECK(cfg.params.mode == adoption::RealizationMode::poisson);
    CHECK(cfg.params.decay.mode == emissions::DecayMode::continuous);
    CHECK(cfg.curve.kind == scenario::CurveSpec::Kind::preset);
    CHECK(cfg.curve.preset == "historical");
    CHECK(cfg.consumption == fs::path("/base/c.csv"));
    CHECK_FALSE(cfg.catalog.has_value());
    CHECK(cfg.household_power_limit_kw == 17.3);
}

TEST_CASE("scenario errors name the offending key")
{
    CHECK(error_of(with(R"(, "colour": "red")")).find("'colour': unknown key") != std::string::npos);
    CHECK(error_of(with(R"(, "grid": {"capacity": 3})")).find("grid.capacity") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 2, "inputs": {}})").find("schema_version") != std::string::npos);
    CHECK(error_of(with(R"(, "adoption": {"mode": "uniform"})")).find("adoption.mode") != std::string::npos);
    CHECK(error_of(with(R"(, "adoption": {"preset": "1m", "curve_csv": "a.csv"})")).find("only one") != std::string::npos);
    CHECK(error_of(with(R"(, "adoption": {"preset": "2m"})")).find("adoption.preset") != std::string::npos);
    CHECK(error_of(with(R"(, "seed": "seven")")).find("wrong type") != std::string::npos);
    CHECK(error_of(with(R"(, "sim_start": "2020-01-01T03:00")")).find("midnight") != std::string::npos);
    CHECK(error_of(with(R"(, "driving": {"departure_window": [5]})")).find("driving.departure_window") != std::string::npos);
    CHECK(error_of(with(R"(, "emissions": {"decay_mode": "linear"})")).find("emissions.decay_mode") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "inputs": {"intensity": "i.csv"}})").find("inputs.consumption") != std::string::npos);
    CHECK(error_of("{not json").find("invalid JSON") != std::string::npos);
    CHECK(error_of(with(R"(, "grid": {"transformer_capacity_kw": -1})")).find("capacity") != std::string::npos);
    CHECK_THROWS_AS(scenario::parse_config("/nonexistent/scenario.json"), InputError);
}

TEST_CASE("logistic curve specification")
{
    const auto cfg = scenario::parse_config_text(
        with(R"(, "adoption": {"logistic": {"A": 2.5e6, "P0": 124, "r": 0.526, "t0_year": 2011}})"), "/base");
    CHECK(cfg.curve.kind == scenario::CurveSpec::Kind::logistic);
    const auto local = scenario::resolve_curve(cfg.curve, 126);
    CHECK(local.count_at(2030) == 66);
    CHECK(error_of(with(R"(, "adoption": {"logistic": {"A": 2.5e6, "P0": 124, "r": 0.5}})")).find("t0_year") !=
          std::string::npos);
}

TEST_CASE("shipped scenario files parse")
{
    for (const auto* name : {"baseline.json", "compare_hist.json", "compare_1m.json", "compare_775k.json"}) {
        CHECK_NOTHROW(scenario::parse_config(testsupport::source_data() / "scenarios" / name));
    }
    CHECK_NOTHROW(scenario::parse_config(testsupport::source_data() / "fixture10" / "scenario.json"));
}

TEST_CASE("sha256")
{
    CHECK(report::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(report::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest hashes change with input bytes")
{
    const auto dir = testsupport::scratch_dir("manifest");
    const auto src = testsupport::source_data() / "fixture10";
    fs::copy_file(src / "consumption.csv", dir / "consumption.csv");
    fs::copy_file(src / "adoption.csv", dir / "adoption.csv");
    testsupport::write_text(dir / "scenario.json", R"({"schema_version": 1, "adoption": {"curve_csv": "adoption.csv"},
        "inputs": {"consumption": "consumption.csv", "intensity": ")" +
                                                       (testsupport::source_data() / "intensity" / "hourly_2017_2020.csv").string() +
                                                       R"("}})");
    const auto cfg = scenario::parse_config(dir / "scenario.json");
    const auto before = report::manifest_json(cfg, {"a", "b", 1.0});
    CHECK(before["inputs"]["catalog"]["builtin"] == true);
    CHECK(before["inputs"]["consumption"]["sha256"] == report::sha256_file(dir / "consumption.csv"));

    auto bytes = csv::read_file(dir / "consumption.csv");
    const auto pos = bytes.rfind('1');
    REQUIRE(pos != std::string::npos);
    bytes[pos] = '2';
    {
        std::ofstream out(dir / "consumption.csv", std::ios::binary);
        out << bytes;
    }
    const auto after = report::manifest_json(cfg, {"a", "b", 1.0});
    CHECK(after["inputs"]["consumption"]["sha256"] != before["inputs"]["consumption"]["sha256"]);
    CHECK(after["inputs"]["adoption_curve"]["sha256"] == before["inputs"]["adoption_curve"]["sha256"]);
    CHECK(after["config_sha256"] == before["config_sha256"]);
}

TEST_CASE("run outputs without an overload")
{
    testsupport::TinyWorld w;
    w.households = 2;
    const auto in = w.build();
    engine::SimulationParams p;
    p.hard_end = make_hour(2021, 1, 1);
    p.transformer_capacity_kw = 1e6;
    const auto r = engine::run(p, in);
    const auto dir = testsupport::scratch_dir("no_overload");
    report::write_run_outputs(dir, r, in.consumption.household_ids, in.catalog);
    const auto summary = nlohmann::json::parse(csv::read_file(dir / "summary.json"));
    CHECK(summary["first_overload"].is_null());
    CHECK(summary["overloads_following_year"].is_null());
    CHECK(summary["stop_time"] == "2021-01-01T00:00");
    CHECK_FALSE(fs::exists(dir / "household_window.csv"));
    CHECK(fs::exists(dir / "first_overload_day.svg"));
    const auto diag = nlohmann::json::parse(csv::read_file(dir / "diagnostics.json"));
    CHECK(diag.is_array());
}

TEST_CASE("svg rendering")
{
    plot::LineChart line;
    line.title = "Load <kW>";
    line.x_ticks = {"a", "b", "c"};
    line.series = {{"total", {1, 2, 3}}};
    line.reference_line = 2.5;
    const auto svg = plot::render(line);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("Load &lt;kW&gt;") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    plot::BarChart bars;
    bars.labels = {"x", "y"};
    bars.values = {1.0, 0.0};
    CHECK(plot::render(bars).find("<rect") != std::string::npos);
}
