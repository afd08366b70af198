#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/bias_lab.hpp"
#include "gitscale/regression.hpp"
#include "gitscale/stat_tests.hpp"

namespace gitscale {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_number(double value);
/// Empty text for a missing value.
[[nodiscard]] std::string format_number(std::optional<double> value);

using CsvRow = std::vector<std::string>;

/// RFC 4180 quoting where needed; rows end with "\n".
[[nodiscard]] std::string to_csv(std::span<const CsvRow> rows);
/// Parses CSV text produced by to_csv (quoted fields, embedded commas and quotes).
[[nodiscard]] std::vector<CsvRow> parse_csv(std::string_view text);

// CSV documents. Each starts with a header row.

/// project, method, variant, coefficient, classification, n_points
[[nodiscard]] std::string scaling_csv(std::span<const ProjectScaling> scalings);
/// project, period_index, beta, p_value, n_windows
[[nodiscard]] std::string periods_csv(std::span<const ProjectScaling> sornette);
/// method, variant, dataset, sublinear, superlinear, undetermined, total
[[nodiscard]] std::string crosstable_csv(const CrossTable& table);
/// Throws InvalidArgument for a document with the wrong header or malformed counts.
[[nodiscard]] CrossTable parse_crosstable_csv(std::string_view text);
/// project, front_load_days, alpha3, determined
[[nodiscard]] std::string sweep_csv(const SweepResult& sweep);
/// front_load_days, mean_alpha3, determined_projects
[[nodiscard]] std::string sweep_mean_csv(const SweepResult& sweep);

struct CompareRow {
    std::string experiment;
    TestOutcome outcome;
    std::optional<double> mean_relative_change;
};

/// experiment, statistic, p_value, n_pairs, mean_relative_change
[[nodiscard]] std::string compare_csv(std::span<const CompareRow> rows);

/// method, variant, dataset, superlinear, determined, percent, percent_label
[[nodiscard]] std::string summary_csv(const SuperlinearitySummary& summary);
/// comparison, sornette_percent, scholtes_percent, difference
[[nodiscard]] std::string headline_csv(const SuperlinearitySummary& summary);

/// Percent with two decimals, as printed on charts.
[[nodiscard]] std::string percent_label(std::optional<double> percent);

/// Fixed-width bins over [-1.5, 2.5) with separate under/overflow counts.
struct Histogram {
    static constexpr int kBins = 40;
    static constexpr int kFirstEdgeTenths = -15;  // -1.5

    std::vector<std::size_t> counts = std::vector<std::size_t>(kBins, 0);
    std::size_t underflow = 0;
    std::size_t overflow = 0;

    [[nodiscard]] static double edge(int k) { return static_cast<double>(kFirstEdgeTenths + k) / 10.0; }
};

[[nodiscard]] Histogram make_histogram(std::span<const double> values);

struct LabeledHistogram {
    std::string method;
    std::string variant;
    Histogram histogram;
};

/// method, variant, bin_lower, bin_upper, count (under/overflow rows use -inf/inf)
[[nodiscard]] std::string histogram_csv(std::span<const LabeledHistogram> histograms);

[[nodiscard]] std::string histogram_svg(const LabeledHistogram& h);
[[nodiscard]] std::string superlinearity_svg(const SuperlinearitySummary& summary);
[[nodiscard]] std::string sweep_svg(const SweepResult& sweep);

}  // namespace gitscale
