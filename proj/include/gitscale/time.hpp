#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace gitscale {

/// A UTC instant with whole-second resolution.
using Instant = std::chrono::sys_seconds;
using Days = std::chrono::days;
using Date = std::chrono::year_month_day;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
[[nodiscard]] std::string format_iso8601(Instant t);

/// Accepts `YYYY-MM-DDTHH:MM:SSZ` and `YYYY-MM-DDTHH:MM:SS+00:00`. Throws InvalidArgument.
[[nodiscard]] Instant parse_iso8601(std::string_view text);

/// Parses a calendar date `YYYY-MM-DD`. Throws InvalidArgument.
[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(Date d);

/// Midnight UTC at the start of `d`.
[[nodiscard]] inline Instant start_of(Date d) {
    return Instant{std::chrono::sys_days{d}.time_since_epoch()};
}

/// Midnight UTC at the start of the day after `d`; the exclusive end of `d`.
[[nodiscard]] inline Instant end_of(Date d) {
    return start_of(d) + Days{1};
}

}  // namespace gitscale
