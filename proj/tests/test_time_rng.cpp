#include "evsim/rng.hpp"
#include "evsim/timeutil.hpp"

#include "doctest.h"

#include <algorithm>
#include <array>
#include <vector>

using namespace evsim;

TEST_CASE("civil time helpers")
{
    const Hour t = make_hour(2031, 10, 21, 16);
    const auto c = civil(t);
    CHECK(c.year == 2031);
    CHECK(c.month == 10);
    CHECK(c.day == 21);
    CHECK(c.hour == 16);
    CHECK(hour_of_day(t) == 16);
    CHECK(year_of(t) == 2031);
    CHECK(hours_in_year(2020) == 8784);
    CHECK(hours_in_year(2019) == 8760);
    CHECK(is_leap(2000));
    CHECK_FALSE(is_leap(1900));
    CHECK(hour_of_year(make_hour(2019, 1, 2, 3)) == 27);
    CHECK(hour_index_in_year(2019, 2, 29, 5) == hour_index_in_year(2019, 2, 28, 5));
    CHECK(hour_index_in_year(2020, 3, 1, 0) == (31 + 29) * 24);
}

TEST_CASE("adding calendar years")
{
    CHECK(add_years(make_hour(2031, 10, 21, 16), 1) == make_hour(2032, 10, 21, 16));
    CHECK(add_years(make_hour(2032, 2, 29, 7), 1) == make_hour(2033, 2, 28, 7));
    CHECK(add_years(make_hour(2032, 2, 29, 7), 4) == make_hour(2036, 2, 29, 7));
}

TEST_CASE("timestamp parsing and formatting")
{
    CHECK(parse_hour("2019-01-01T05:00") == make_hour(2019, 1, 1, 5));
    CHECK(parse_hour("2019-01-01 05:00:00") == make_hour(2019, 1, 1, 5));
    CHECK(parse_minute("2019-06-30T23:55") == Minute{make_hour(2019, 6, 30, 23)} + std::chrono::minutes{55});
    CHECK(format_hour(make_hour(2031, 3, 7, 9)) == "2031-03-07T09:00");
    CHECK(format_date(day_of(make_hour(2031, 3, 7, 9))) == "2031-03-07");
    CHECK_THROWS_AS(parse_hour("2019-13-01T00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour("2019-02-30T00:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour("yesterday"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hour("2019-01-01T05:30"), std::invalid_argument);
}

TEST_CASE("SplitMix64 reference values")
{
    // Published first outputs of SplitMix64 seeded with 0.
    Rng r(0);
    CHECK(r.next() == 0xE220A8397B1DCDAFULL);
    CHECK(r.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(r.next() == 0x06C45D188009454FULL);
}

TEST_CASE("derived draws stay in range and replay")
{
    Rng a(99), b(99);
    std::array<int, 7> counts{};
    for (int i = 0; i < 70'000; ++i) {
        const auto x = a.uniform_int(3, 9);
        REQUIRE(x == b.uniform_int(3, 9));
        REQUIRE(x >= 3);
        REQUIRE(x <= 9);
        ++counts[std::size_t(x - 3)];
        const double u = a.uniform01();
        REQUIRE(u == b.uniform01());
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    for (const int c : counts) {
        CHECK(std::abs(c / 10'000.0 - 1.0) < 0.05);
    }

    std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7};
    Rng s(5);
    s.shuffle(std::span<int>(items));
    std::vector<int> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("poisson draws have the requested mean")
{
    for (const double mean : {0.5, 4.0, 75.0}) {
        Rng r(std::uint64_t(mean * 10));
        double sum = 0.0;
        const int n = 40'000;
        for (int i = 0; i < n; ++i) {
            sum += double(r.poisson(mean));
        }
        CHECK(std::abs(sum / n - mean) < 0.03 * mean + 0.02);
    }
    Rng r(1);
    CHECK(r.poisson(0.0) == 0);
}
