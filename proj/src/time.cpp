#include "gitscale/time.hpp"

#include <charconv>
#include <cstdio>

#include "gitscale/errors.hpp"

namespace gitscale {
namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t width, std::string_view what) {
    if (pos + width > text.size()) {
        throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + width;
    for (const char* p = first; p != last; ++p) {
        if (*p < '0' || *p > '9') {
            throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
        }
    }
    std::from_chars(first, last, value);
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c, std::string_view what) {
    if (pos >= text.size() || text[pos] != c) {
        throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
}

Date read_date(std::string_view text, std::string_view what) {
    const int y = read_fixed(text, 0, 4, what);
    expect_char(text, 4, '-', what);
    const int m = read_fixed(text, 5, 2, what);
    expect_char(text, 7, '-', what);
    const int d = read_fixed(text, 8, 2, what);
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw InvalidArgument("invalid calendar date: '" + std::string(text) + "'");
    }
    return date;
}

}  // namespace

std::string format_iso8601(Instant t) {
    const auto day = std::chrono::floor<Days>(t);
    const Date ymd{day};
    const std::chrono::hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Instant parse_iso8601(std::string_view text) {
    constexpr std::string_view what = "ISO-8601 timestamp";
    const Date date = read_date(text, what);
    expect_char(text, 10, 'T', what);
    const int hh = read_fixed(text, 11, 2, what);
    expect_char(text, 13, ':', what);
    const int mm = read_fixed(text, 14, 2, what);
    expect_char(text, 16, ':', what);
    const int ss = read_fixed(text, 17, 2, what);
    const std::string_view zone = text.substr(19);
    if (zone != "Z" && zone != "+00:00") {
        throw InvalidArgument("timestamp is not UTC: '" + std::string(text) + "'");
    }
    if (hh > 23 || mm > 59 || ss > 59) {
        throw InvalidArgument("time of day out of range: '" + std::string(text) + "'");
    }
    return start_of(date) + std::chrono::hours{hh} + std::chrono::minutes{mm} +
           std::chrono::seconds{ss};
}

Date parse_date(std::string_view text) {
    if (text.size() != 10) {
        throw InvalidArgument("malformed date (want YYYY-MM-DD): '" + std::string(text) + "'");
    }
    return read_date(text, "date");
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

}  // namespace gitscale
