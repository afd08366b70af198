#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gitscale/commit_record.hpp"
#include "gitscale/time.hpp"

namespace gitscale {

/// What counts as a team's output in a window.
enum class Measure {
    file_edits,   ///< number of modified files, binary ones included
    levenshtein,  ///< summed character edit distance over text files
};

[[nodiscard]] std::string_view to_string(Measure m);
/// Throws InvalidArgument for unknown names.
[[nodiscard]] Measure parse_measure(std::string_view name);

inline constexpr Days kSornettePeriod{250};
inline constexpr Days kSornetteWindow{5};
inline constexpr Days kScholtesOutputWindow{7};
inline constexpr Days kScholtesTeamWindow{295};

/// A trailing period shorter than kSornettePeriod is only kept with this many samples.
inline constexpr std::size_t kMinTrailingPeriodSamples = 2;

/// One regression data point.
struct WindowSample {
    Instant window_start{};
    Instant window_end{};
    Instant team_window_start{};
    std::size_t team_size = 0;
    double output = 0.0;
    double productivity = 0.0;

    friend bool operator==(const WindowSample&, const WindowSample&) = default;
};

struct PeriodSamples {
    std::size_t period_index = 0;
    Instant period_start{};
    Instant period_end{};
    std::vector<WindowSample> samples;

    friend bool operator==(const PeriodSamples&, const PeriodSamples&) = default;
};

[[nodiscard]] double commit_output(const CommitRecord& record, Measure measure);

// All builders below take records sorted by timestamp. The analysed range starts at
// the first record and ends at `analysis_end` (exclusive); without one it ends one
// second after the last record. Windows are counted in whole seconds from the first
// record. Windows with no output are not emitted.

/// Splits the range into 250-day periods of 5-day windows; team size and output are
/// both taken over the same 5-day window. Throws EmptyRecordStream.
[[nodiscard]] std::vector<PeriodSamples> build_sornette_periods(std::span<const CommitRecord> records,
                                                                Measure measure,
                                                                std::optional<Instant> analysis_end = std::nullopt);

/// Consecutive 7-day output windows, each paired with the distinct authors of the
/// 295-day window ending where the output window ends (clipped at the first record).
/// Throws EmptyRecordStream.
[[nodiscard]] std::vector<WindowSample> build_scholtes_samples(std::span<const CommitRecord> records,
                                                               Measure measure = Measure::levenshtein,
                                                               std::optional<Instant> analysis_end = std::nullopt);

/// Drops every commit of authors with exactly one commit. A single pass: authors
/// left with one commit afterwards are kept.
[[nodiscard]] std::vector<CommitRecord> filter_one_time_contributors(std::span<const CommitRecord> records);

/// Drops commits earlier than `days` after the first commit.
[[nodiscard]] std::vector<CommitRecord> apply_front_load_filter(std::span<const CommitRecord> records, Days days);

/// Removes floor(fraction * n) commits from each end of the distribution of total
/// commit edit distance (ties ordered by commit id). `fraction` must lie in [0, 0.5).
[[nodiscard]] std::vector<CommitRecord> trim_levenshtein_outliers(std::span<const CommitRecord> records,
                                                                  double fraction = 0.025);

}  // namespace gitscale
