#pragma once

#include "evsim/rng.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace evsim::driving {

/// 24 hourly loads of one household on one day, kW.
using DayProfile = std::array<double, 24>;

/// Inclusive range of hours of the day.
struct HourWindow {
    int first = 0;
    int last = 0;

    bool contains(int hour) const { return hour >= first && hour <= last; }
};

inline constexpr HourWindow kDepartureWindow{5, 9};
inline constexpr HourWindow kArrivalWindow{14, 22};
inline constexpr double kSignificanceFactor = 1.8; // 80 % above idle

struct TripPlan {
    int departure_hour = 0;
    int arrival_hour = 0;
    double distance_km = 0.0;
};

/// Mean of hours 0 through 5 inclusive.
double idle_load(const DayProfile& profile);

double significance_threshold(double idle, double factor = kSignificanceFactor);

/// First sub-threshold hour following a supra-threshold hour, both within the window.
std::optional<int> infer_departure(const DayProfile& profile, HourWindow window, double threshold);
std::optional<int> infer_departure(const DayProfile& profile, HourWindow window = kDepartureWindow);

/// First hour in the window whose load exceeds the threshold. If the window
/// opens above threshold the crossing is taken to be the window start.
std::optional<int> infer_arrival(const DayProfile& profile, HourWindow window, double threshold);
std::optional<int> infer_arrival(const DayProfile& profile, HourWindow window = kArrivalWindow);

/// Uniform departure then uniform arrival hour; always two draws.
std::pair<int, int> fallback_times(Rng& rng, HourWindow departure = kDepartureWindow,
                                   HourWindow arrival = kArrivalWindow);

class DistanceDistribution {
public:
    struct Bin {
        double distance_km = 0.0;
        double probability = 0.0;
    };

    explicit DistanceDistribution(std::vector<Bin> bins);

    const std::vector<Bin>& bins() const noexcept { return bins_; }
    double mean() const;
    double max_distance() const;

    double sample(Rng& rng) const;

private:
    std::vector<Bin> bins_;
    std::vector<double> cumulative_;
};

double sample_distance(const DistanceDistribution& dist, Rng& rng);

/// CSV with header `distance_km,probability`.
DistanceDistribution load_distances(const std::filesystem::path& path);

} // namespace evsim::driving
