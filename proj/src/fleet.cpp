#include "evsim/fleet.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

#include <algorithm>

namespace evsim::fleet {

namespace {

void check_model(const EvModel& m)
{
    if (m.name.empty()) {
        throw ValidationError("EV model without a name");
    }
    if (!(m.battery_capacity_kwh > 0.0) || !(m.mileage_kwh_per_km > 0.0) || !(m.max_charge_power_kw > 0.0)) {
        throw ValidationError("EV model '" + m.name + "' needs positive capacity, mileage and power");
    }
    if (!(m.purchase_share > 0.0) || m.purchase_share > 1.0) {
        throw ValidationError("EV model '" + m.name + "' share must be in (0, 1]");
    }
}

} // namespace

Catalog::Catalog(std::vector<EvModel> models, double household_power_limit_kw)
    : models_(std::move(models)), limit_kw_(household_power_limit_kw)
{
    if (models_.empty()) {
        throw ValidationError("EV catalog is empty");
    }
    if (!(limit_kw_ > 0.0)) {
        throw ValidationError("household power limit must be positive");
    }
    double total = 0.0;
    for (const auto& m : models_) {
        check_model(m);
        total += m.purchase_share;
    }
    double running = 0.0;
    for (auto& m : models_) {
        m.purchase_share /= total;
        running += m.purchase_share;
        cumulative_.push_back(running);
    }
}

std::size_t Catalog::index_of(const std::string& name) const
{
    const auto it = std::find_if(models_.begin(), models_.end(), [&](const EvModel& m) { return m.name == name; });
    if (it == models_.end()) {
        throw ValidationError("unknown EV model '" + name + "'");
    }
    return std::size_t(it - models_.begin());
}

std::vector<EvModel> default_models()
{
    return {
        {"Tesla Model 3", 50.0, 0.151, 11.0, 0.405},
        {"VW e-Golf", 35.8, 0.168, 7.2, 0.180},
        {"Hyundai Kona", 42.0, 0.154, 11.0, 0.083},
        {"Renault Zoe", 44.1, 0.161, 22.0, 0.060},
        {"Nissan Leaf", 40.0, 0.164, 3.68, 0.058},
    };
}

Catalog load_catalog(const std::filesystem::path& path, double household_power_limit_kw)
{
    csv::Reader reader(path, {"name", "capacity_kwh", "mileage_kwh_per_km", "max_power_kw", "share"});
    std::vector<EvModel> models;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        EvModel m{std::string(f[0]), reader.number(f[1], "capacity_kwh"), reader.number(f[2], "mileage_kwh_per_km"),
                  reader.number(f[3], "max_power_kw"), reader.number(f[4], "share")};
        try {
            check_model(m);
        } catch (const ValidationError& e) {
            reader.fail(e.what());
        }
        models.push_back(std::move(m));
    }
    if (models.empty()) {
        throw InputError(path.string(), 0, "catalog has no models");
    }
    return Catalog(std::move(models), household_power_limit_kw);
}

std::size_t sample_model(const Catalog& catalog, Rng& rng) { return rng.categorical(catalog.cumulative_shares()); }

double effective_charge_power(const EvModel& model, double limit_kw) { return std::min(model.max_charge_power_kw, limit_kw); }

const char* to_string(EvStatus status)
{
    switch (status) {
    case EvStatus::home_idle:
        return "home_idle";
    case EvStatus::away:
        return "away";
    case EvStatus::charging:
        return "charging";
    }
    return "unknown";
}

} // namespace evsim::fleet
