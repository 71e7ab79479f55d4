#include "evsim/driving.hpp"

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace evsim::driving {

double idle_load(const DayProfile& profile)
{
    double sum = 0.0;
    for (int h = 0; h <= 5; ++h) {
        sum += profile[std::size_t(h)];
    }
    return sum / 6.0;
}

double significance_threshold(double idle, double factor) { return factor * idle; }

std::optional<int> infer_departure(const DayProfile& profile, HourWindow window, double threshold)
{
    bool awake = false;
    for (int h = window.first; h <= window.last; ++h) {
        const double load = profile[std::size_t(h)];
        if (!awake) {
            awake = load > threshold;
        } else if (load <= threshold) {
            return h;
        }
    }
    return std::nullopt;
}

std::optional<int> infer_departure(const DayProfile& profile, HourWindow window)
{
    return infer_departure(profile, window, significance_threshold(idle_load(profile)));
}

std::optional<int> infer_arrival(const DayProfile& profile, HourWindow window, double threshold)
{
    for (int h = window.first; h <= window.last; ++h) {
        if (profile[std::size_t(h)] > threshold) {
            return h;
        }
    }
    return std::nullopt;
}

std::optional<int> infer_arrival(const DayProfile& profile, HourWindow window)
{
    return infer_arrival(profile, window, significance_threshold(idle_load(profile)));
}

std::pair<int, int> fallback_times(Rng& rng, HourWindow departure, HourWindow arrival)
{
    const auto dep = int(rng.uniform_int(departure.first, departure.last));
    const auto arr = int(rng.uniform_int(arrival.first, arrival.last));
    return {dep, arr};
}

DistanceDistribution::DistanceDistribution(std::vector<Bin> bins) : bins_(std::move(bins))
{
    if (bins_.empty()) {
        throw ValidationError("distance distribution has no bins");
    }
    double total = 0.0;
    for (const auto& b : bins_) {
        if (!(b.distance_km > 0.0)) {
            throw ValidationError("distance bins must be positive");
        }
        if (!(b.probability >= 0.0)) {
            throw ValidationError("distance probabilities must be non-negative");
        }
        total += b.probability;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw ValidationError("distance probabilities sum to " + csv::format_double(total) + ", expected 1");
    }
}

double DistanceDistribution::mean() const
{
    double m = 0.0;
    for (const auto& b : bins_) {
        m += b.distance_km * b.probability;
    }
    return m;
}

double DistanceDistribution::max_distance() const
{
    double m = 0.0;
    for (const auto& b : bins_) {
        if (b.probability > 0.0) {
            m = std::max(m, b.distance_km);
        }
    }
    return m;
}

double DistanceDistribution::sample(Rng& rng) const { return bins_[rng.categorical(cumulative_)].distance_km; }

double sample_distance(const DistanceDistribution& dist, Rng& rng) { return dist.sample(rng); }

DistanceDistribution load_distances(const std::filesystem::path& path)
{
    csv::Reader reader(path, {"distance_km", "probability"});
    std::vector<DistanceDistribution::Bin> bins;
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        bins.push_back({reader.number(f[0], "distance_km"), reader.number(f[1], "probability")});
    }
    try {
        return DistanceDistribution(std::move(bins));
    } catch (const ValidationError& e) {
        throw InputError(path.string(), 0, e.what());
    }
}

} // namespace evsim::driving
