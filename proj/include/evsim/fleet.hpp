#pragma once

#include "evsim/rng.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace evsim::fleet {

/// Default household connection limit: three phases of 25 A.
inline constexpr double kDefaultHouseholdLimitKw = 17.3;

struct EvModel {
    std::string name;
    double battery_capacity_kwh = 0.0;
    double mileage_kwh_per_km = 0.0;
    double max_charge_power_kw = 0.0;
    double purchase_share = 0.0;
};

/// Immutable model catalog. Shares are renormalized to sum to one.
class Catalog {
public:
    Catalog(std::vector<EvModel> models, double household_power_limit_kw = kDefaultHouseholdLimitKw);

    const std::vector<EvModel>& models() const noexcept { return models_; }
    const EvModel& model(std::size_t index) const { return models_.at(index); }
    std::size_t size() const noexcept { return models_.size(); }
    double household_power_limit_kw() const noexcept { return limit_kw_; }

    /// Running sum of renormalized shares, for categorical draws.
    const std::vector<double>& cumulative_shares() const noexcept { return cumulative_; }
    std::size_t index_of(const std::string& name) const;

private:
    std::vector<EvModel> models_;
    std::vector<double> cumulative_;
    double limit_kw_;
};

/// The five best-selling models in Denmark in 2019.
std::vector<EvModel> default_models();

/// CSV with header `name,capacity_kwh,mileage_kwh_per_km,max_power_kw,share`.
Catalog load_catalog(const std::filesystem::path& path, double household_power_limit_kw = kDefaultHouseholdLimitKw);

std::size_t sample_model(const Catalog& catalog, Rng& rng);

double effective_charge_power(const EvModel& model, double limit_kw);

enum class EvStatus { home_idle, away, charging };

const char* to_string(EvStatus status);

struct EvState {
    std::size_t model = 0;     ///< index into the catalog
    double soc_kwh = 0.0;
    EvStatus status = EvStatus::home_idle;
    std::size_t owner = 0;     ///< household index
    int id = 0;                ///< adoption order
};

} // namespace evsim::fleet
