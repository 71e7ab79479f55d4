#include "evsim/timeutil.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace evsim {

using namespace std::chrono;

Hour make_hour(int year, unsigned month, unsigned day, unsigned hour)
{
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok() || hour > 23) {
        throw std::invalid_argument("invalid calendar time " + std::to_string(year) + "-" +
                                    std::to_string(month) + "-" + std::to_string(day) + " " +
                                    std::to_string(hour) + "h");
    }
    return Hour{sys_days{ymd}} + hours{hour};
}

CivilTime civil(Hour t)
{
    const auto d = floor<days>(t);
    const year_month_day ymd{d};
    return CivilTime{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                     unsigned((t - d).count())};
}

int year_of(Hour t) { return int(year_month_day{floor<days>(t)}.year()); }

unsigned hour_of_day(Hour t) { return unsigned((t - floor<days>(t)).count()); }

sys_days day_of(Hour t) { return floor<days>(t); }

bool is_leap(int y) { return std::chrono::year{y}.is_leap(); }

int hours_in_year(int y) { return is_leap(y) ? 8784 : 8760; }

int hour_of_year(Hour t)
{
    const int y = year_of(t);
    return int((t - make_hour(y, 1, 1)).count());
}

int hour_index_in_year(int y, unsigned month, unsigned day, unsigned hour)
{
    if (month == 2 && day == 29 && !is_leap(y)) {
        day = 28;
    }
    return int((make_hour(y, month, day, hour) - make_hour(y, 1, 1)).count());
}

Hour add_years(Hour t, int years)
{
    auto c = civil(t);
    const int y = c.year + years;
    if (c.month == 2 && c.day == 29 && !is_leap(y)) {
        c.day = 28;
    }
    return make_hour(y, c.month, c.day, c.hour);
}

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len)
{
    if (pos + len > text.size()) {
        throw std::invalid_argument("truncated timestamp '" + std::string(text) + "'");
    }
    int value = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, std::string_view allowed)
{
    if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos) {
        throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
    }
}

} // namespace

Minute parse_minute(std::string_view text)
{
    // YYYY-MM-DDTHH:MM[:SS]
    expect_char(text, 4, "-");
    expect_char(text, 7, "-");
    expect_char(text, 10, "T ");
    expect_char(text, 13, ":");
    const int y = parse_field(text, 0, 4);
    const int mo = parse_field(text, 5, 2);
    const int d = parse_field(text, 8, 2);
    const int h = parse_field(text, 11, 2);
    const int mi = parse_field(text, 14, 2);
    if (text.size() > 16) {
        expect_char(text, 16, ":");
        if (text.size() != 19 || parse_field(text, 17, 2) != 0) {
            throw std::invalid_argument("timestamps must fall on whole minutes: '" + std::string(text) + "'");
        }
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59) {
        throw std::invalid_argument("timestamp out of range '" + std::string(text) + "'");
    }
    return Minute{make_hour(y, unsigned(mo), unsigned(d), unsigned(h))} + minutes{mi};
}

Hour parse_hour(std::string_view text)
{
    const Minute m = parse_minute(text);
    const Hour h = floor<hours>(m);
    if (Minute{h} != m) {
        throw std::invalid_argument("timestamp not on an hour boundary '" + std::string(text) + "'");
    }
    return h;
}

std::string format_hour(Hour t)
{
    const auto c = civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:00", c.year, c.month, c.day, c.hour);
    return buf;
}

std::string format_date(sys_days d)
{
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

} // namespace evsim
