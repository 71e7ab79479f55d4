#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace evsim {

/// SplitMix64 stream with portable, fully specified derived distributions.
///
/// Every draw is defined in terms of `next()` alone so that a run can be
/// replayed outside this code base (the golden re-simulation relies on it).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

    std::uint64_t next()
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] by rejection (no modulo bias).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const std::uint64_t span = std::uint64_t(hi - lo) + 1;
        if (span == 0) {
            return std::int64_t(next());
        }
        const std::uint64_t limit = max() - (max() % span + 1) % span;
        std::uint64_t x = next();
        while (x > limit) {
            x = next();
        }
        return lo + std::int64_t(x % span);
    }

    /// Poisson variate. Knuth's product method, applied in chunks of mean
    /// at most 30 so exp(-mean) never underflows.
    std::int64_t poisson(double mean)
    {
        std::int64_t total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 30.0 ? 30.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            std::int64_t k = 0;
            double p = uniform01();
            while (p > limit) {
                ++k;
                p *= uniform01();
            }
            total += k;
        }
        return total;
    }

    /// Index of the first cumulative weight strictly above a uniform draw.
    /// `cumulative` must be non-decreasing and end at (approximately) 1.
    std::size_t categorical(std::span<const double> cumulative)
    {
        const double u = uniform01();
        for (std::size_t i = 0; i < cumulative.size(); ++i) {
            if (u < cumulative[i]) {
                return i;
            }
        }
        return cumulative.size() - 1;
    }

    /// Fisher-Yates, walking from the back.
    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = std::size_t(uniform_int(0, std::int64_t(i - 1)));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace evsim
