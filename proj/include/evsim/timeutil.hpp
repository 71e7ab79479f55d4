#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace evsim {

/// Hourly simulation timestamp (UTC-free civil time, no DST).
using Hour = std::chrono::sys_time<std::chrono::hours>;

/// Five-minute resolution timestamp used by raw intensity series.
using Minute = std::chrono::sys_time<std::chrono::minutes>;

struct CivilTime {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;
    unsigned hour = 0;
};

Hour make_hour(int year, unsigned month, unsigned day, unsigned hour = 0);
CivilTime civil(Hour t);

int year_of(Hour t);
unsigned hour_of_day(Hour t);
std::chrono::sys_days day_of(Hour t);

bool is_leap(int year);
int hours_in_year(int year);

/// Hours elapsed since Jan 1 00:00 of the timestamp's own year.
int hour_of_year(Hour t);

/// Index of (month, day, hour) inside `year`, with Feb 29 falling back to
/// Feb 28 when `year` is not a leap year.
int hour_index_in_year(int year, unsigned month, unsigned day, unsigned hour);

/// Same month/day/hour one calendar year later; Feb 29 maps to Feb 28.
Hour add_years(Hour t, int years);

/// Parses `YYYY-MM-DDTHH:MM[:SS]` (a space is accepted in place of `T`).
/// Throws std::invalid_argument on malformed input.
Minute parse_minute(std::string_view text);
Hour parse_hour(std::string_view text);

std::string format_hour(Hour t);
std::string format_date(std::chrono::sys_days d);

} // namespace evsim
