#include "gitscale/windows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "gitscale/errors.hpp"

namespace gitscale {
namespace {

Instant resolve_end(std::span<const CommitRecord> records, std::optional<Instant> analysis_end) {
    if (records.empty()) throw EmptyRecordStream();
    const bool sorted = std::is_sorted(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return a.timestamp < b.timestamp;
    });
    if (!sorted) throw InvalidArgument("records must be sorted by timestamp");
    const Instant last = records.back().timestamp;
    if (!analysis_end) return last + std::chrono::seconds{1};
    if (*analysis_end <= last) throw InvalidArgument("analysis end must lie after the last record");
    return *analysis_end;
}

// ceil(span / step) for positive spans.
std::int64_t window_count(std::chrono::seconds span, std::chrono::seconds step) {
    return (span.count() + step.count() - 1) / step.count();
}

WindowSample make_sample(Instant start, Instant end, Instant team_start, std::size_t team, double output) {
    return {start, end, team_start, team, output, output / static_cast<double>(team)};
}

}  // namespace

std::string_view to_string(Measure m) {
    switch (m) {
        case Measure::file_edits:
            return "file_edits";
        case Measure::levenshtein:
            return "levenshtein";
    }
    return "unknown";
}

Measure parse_measure(std::string_view name) {
    if (name == "file_edits") return Measure::file_edits;
    if (name == "levenshtein") return Measure::levenshtein;
    throw InvalidArgument("unknown measure '" + std::string(name) + "' (want file_edits or levenshtein)");
}

double commit_output(const CommitRecord& record, Measure measure) {
    return measure == Measure::file_edits ? static_cast<double>(record.files_modified())
                                          : static_cast<double>(record.total_distance());
}

std::vector<PeriodSamples> build_sornette_periods(std::span<const CommitRecord> records, Measure measure,
                                                  std::optional<Instant> analysis_end) {
    const Instant end = resolve_end(records, analysis_end);
    const Instant origin = records.front().timestamp;
    const std::int64_t periods = window_count(end - origin, kSornettePeriod);

    std::vector<PeriodSamples> out;
    std::size_t next = 0;
    std::unordered_set<std::string_view> authors;
    for (std::int64_t p = 0; p < periods; ++p) {
        PeriodSamples period;
        period.period_index = static_cast<std::size_t>(p);
        period.period_start = origin + p * kSornettePeriod;
        period.period_end = std::min<Instant>(period.period_start + kSornettePeriod, end);
        for (Instant ws = period.period_start; ws < period.period_end; ws += kSornetteWindow) {
            const Instant we = std::min<Instant>(ws + kSornetteWindow, period.period_end);
            authors.clear();
            double output = 0.0;
            while (next < records.size() && records[next].timestamp < we) {
                authors.insert(records[next].author_email);
                output += commit_output(records[next], measure);
                ++next;
            }
            if (output > 0.0 && !authors.empty()) {
                period.samples.push_back(make_sample(ws, we, ws, authors.size(), output));
            }
        }
        const bool partial = period.period_end - period.period_start < kSornettePeriod;
        if (!partial || period.samples.size() >= kMinTrailingPeriodSamples) out.push_back(std::move(period));
    }
    return out;
}

std::vector<WindowSample> build_scholtes_samples(std::span<const CommitRecord> records, Measure measure,
                                                 std::optional<Instant> analysis_end) {
    const Instant end = resolve_end(records, analysis_end);
    const Instant origin = records.front().timestamp;
    const std::int64_t windows = window_count(end - origin, kScholtesOutputWindow);

    std::vector<WindowSample> out;
    std::unordered_map<std::string_view, std::size_t> team;  // author -> commits in team window
    std::size_t team_lo = 0;
    std::size_t team_hi = 0;
    std::size_t output_lo = 0;
    for (std::int64_t w = 0; w < windows; ++w) {
        const Instant ws = origin + w * kScholtesOutputWindow;
        const Instant we = std::min<Instant>(ws + kScholtesOutputWindow, end);
        const Instant ts = std::max<Instant>(origin, we - kScholtesTeamWindow);

        while (team_hi < records.size() && records[team_hi].timestamp < we) {
            ++team[records[team_hi].author_email];
            ++team_hi;
        }
        while (team_lo < team_hi && records[team_lo].timestamp < ts) {
            const auto it = team.find(records[team_lo].author_email);
            if (--it->second == 0) team.erase(it);
            ++team_lo;
        }
        double output = 0.0;
        while (output_lo < records.size() && records[output_lo].timestamp < we) {
            output += commit_output(records[output_lo], measure);
            ++output_lo;
        }
        if (output > 0.0 && !team.empty()) out.push_back(make_sample(ws, we, ts, team.size(), output));
    }
    return out;
}

std::vector<CommitRecord> filter_one_time_contributors(std::span<const CommitRecord> records) {
    std::unordered_map<std::string_view, std::size_t> commits;
    for (const CommitRecord& r : records) ++commits[r.author_email];
    std::vector<CommitRecord> out;
    out.reserve(records.size());
    for (const CommitRecord& r : records) {
        if (commits[r.author_email] != 1) out.push_back(r);
    }
    return out;
}

std::vector<CommitRecord> apply_front_load_filter(std::span<const CommitRecord> records, Days days) {
    if (days < Days{0}) throw InvalidArgument("front-load days must be non-negative");
    if (records.empty() || days == Days{0}) return {records.begin(), records.end()};
    const Instant first = std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
                              return a.timestamp < b.timestamp;
                          })->timestamp;
    const Instant keep_from = first + days;
    std::vector<CommitRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [keep_from](const CommitRecord& r) { return r.timestamp >= keep_from; });
    return out;
}

std::vector<CommitRecord> trim_levenshtein_outliers(std::span<const CommitRecord> records, double fraction) {
    if (!(fraction >= 0.0 && fraction < 0.5)) {
        throw InvalidArgument("outlier fraction must lie in [0, 0.5), got " + std::to_string(fraction));
    }
    const auto per_tail = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(records.size())));
    if (per_tail == 0) return {records.begin(), records.end()};

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::uint64_t> totals(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) totals[i] = records[i].total_distance();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (totals[a] != totals[b]) return totals[a] < totals[b];
        return records[a].commit_id < records[b].commit_id;
    });
    std::vector<bool> drop(records.size(), false);
    for (std::size_t k = 0; k < per_tail; ++k) {
        drop[order[k]] = true;
        drop[order[order.size() - 1 - k]] = true;
    }
    std::vector<CommitRecord> out;
    out.reserve(records.size() - 2 * per_tail);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!drop[i]) out.push_back(records[i]);
    }
    return out;
}

}  // namespace gitscale
