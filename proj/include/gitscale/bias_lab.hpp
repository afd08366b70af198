#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/commit_record.hpp"
#include "gitscale/manifest.hpp"
#include "gitscale/regression.hpp"
#include "gitscale/stat_tests.hpp"
#include "gitscale/windows.hpp"

namespace gitscale {

enum class Contributors { all, no_one_timers };
enum class PFilter { p_filtered, unfiltered };

[[nodiscard]] std::string_view to_string(Contributors c);
[[nodiscard]] std::string_view to_string(PFilter p);

/// A regression method plus its variant, written `method:model:contributors:pfilter`
/// with an optional `:fl<days>` suffix for front-load days, e.g.
/// `sornette:loglog:all:p_filtered` or `scholtes:loglog:all:unfiltered:fl330`.
struct MethodSpec {
    Method method = Method::sornette;
    Model model = Model::loglog;
    Contributors contributors = Contributors::all;
    PFilter p_filter = PFilter::unfiltered;
    int front_load_days = 0;

    /// Everything after the method name.
    [[nodiscard]] std::string variant() const;
    [[nodiscard]] std::string to_string() const;
    /// Throws InvalidArgument; rejects combinations the methods do not define
    /// (Sornette log-lin, p-filtered Scholtes).
    [[nodiscard]] static MethodSpec parse(std::string_view text);

    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

struct AnalysisOptions {
    /// Threshold used by p-filtered variants.
    std::optional<double> p_threshold = kDefaultPThreshold;
    /// Share trimmed from each tail of commit edit distances; 0 disables trimming.
    double outlier_fraction = 0.0;
    /// Overrides each method's own output measure (file edits for Sornette,
    /// edit distance for Scholtes).
    std::optional<Measure> measure;
};

[[nodiscard]] Measure measure_for(Method method, const AnalysisOptions& options);

/// One project of one dataset with its mined records; `records` is null when the
/// record file was missing.
struct ProjectInput {
    std::string dataset;
    ProjectEntry entry;
    std::shared_ptr<const std::vector<CommitRecord>> records;

    /// `dataset/id`, unique across datasets.
    [[nodiscard]] std::string key() const { return dataset + "/" + entry.id; }
};

/// Applies, in order: the project's date range, outlier trimming, the one-time
/// contributor filter and the front-load filter.
[[nodiscard]] std::vector<CommitRecord> prepare_records(const ProjectInput& project, const MethodSpec& spec,
                                                        const AnalysisOptions& options);

/// Runs one method variant on one project; undetermined when nothing survives.
[[nodiscard]] ProjectScaling evaluate_project(const ProjectInput& project, const MethodSpec& spec,
                                              const AnalysisOptions& options);

struct CrossRow {
    std::string method;
    std::string variant;
    std::string dataset;
    std::size_t sublinear = 0;
    std::size_t superlinear = 0;
    std::size_t undetermined = 0;
    std::size_t total = 0;

    friend bool operator==(const CrossRow&, const CrossRow&) = default;
};

struct CrossTable {
    std::vector<CrossRow> rows;

    [[nodiscard]] const CrossRow* find(std::string_view method, std::string_view variant,
                                       std::string_view dataset) const;
};

struct CrossApplyResult {
    CrossTable table;
    /// Sorted by project key, then by method spec order.
    std::vector<ProjectScaling> scalings;
    std::vector<std::string> warnings;
};

/// Evaluates every spec on every project and counts classifications per dataset.
/// Rows follow spec order, then dataset order of first appearance.
[[nodiscard]] CrossApplyResult cross_apply(std::span<const ProjectInput> projects, std::span<const MethodSpec> specs,
                                           const AnalysisOptions& options, std::size_t jobs = 1);

/// Paired values per project plus a signed-rank test on them.
struct PairedComparison {
    std::vector<std::string> projects;
    std::vector<double> first;
    std::vector<double> second;
    /// Mean of (first - second) / first.
    double mean_relative_change = 0.0;
    TestOutcome outcome;
};

/// Pairs projects determined under both settings (matched by project key) and
/// compares filtered against unfiltered average beta. Throws InsufficientData when
/// no pair exists and DegeneratePairs when all pairs are equal.
[[nodiscard]] PairedComparison p_filter_comparison(std::span<const ProjectScaling> filtered,
                                                   std::span<const ProjectScaling> unfiltered);

/// Runs both Sornette settings over the projects, then compares them.
[[nodiscard]] PairedComparison p_filter_comparison(std::span<const ProjectInput> projects,
                                                   const AnalysisOptions& options, std::size_t jobs = 1);

/// Average beta with and without period 0, for projects with at least two periods.
[[nodiscard]] PairedComparison drop_first_period_comparison(std::span<const ProjectScaling> sornette,
                                                            std::optional<double> p_threshold);

struct SweepOptions {
    Model model = Model::loglog;
    Contributors contributors = Contributors::all;
    AnalysisOptions analysis{};
};

struct SweepResult {
    std::vector<int> grid;
    std::vector<std::string> projects;
    /// alpha3[project][grid point]; empty when undetermined.
    std::vector<std::vector<std::optional<double>>> alpha3;
    /// Mean over determined projects per grid point.
    std::vector<std::optional<double>> mean_alpha3;
    std::vector<std::size_t> determined;
};

/// Default grid: 0 to 720 days in steps of 30.
[[nodiscard]] std::vector<int> default_front_load_grid();

/// Recomputes Scholtes' alpha3 for every front-load day count in `grid` (non-empty,
/// non-negative, strictly ascending). Projects are reported in key order.
[[nodiscard]] SweepResult sweep_front_load_days(std::span<const ProjectInput> projects, std::span<const int> grid,
                                                const SweepOptions& options, std::size_t jobs = 1);

struct SummaryRow {
    std::string method;
    std::string variant;
    std::string dataset;
    std::size_t superlinear = 0;
    std::size_t determined = 0;
    /// 100 * superlinear / determined; empty when nothing was determined.
    std::optional<double> percent;
};

struct HeadlineDifference {
    std::string name;
    std::optional<double> sornette_percent;
    std::optional<double> scholtes_percent;
    std::optional<double> difference;
};

/// Which rows of a cross table play which role in the headline comparisons.
struct SummaryRoles {
    std::string sornette_dataset = "sornette";
    std::string scholtes_dataset = "scholtes";
    MethodSpec sornette_original{Method::sornette, Model::loglog, Contributors::all, PFilter::p_filtered, 0};
    MethodSpec sornette_adjusted{Method::sornette, Model::loglog, Contributors::all, PFilter::unfiltered, 0};
    MethodSpec scholtes_original{Method::scholtes, Model::loglog, Contributors::all, PFilter::unfiltered, 0};
    MethodSpec scholtes_adjusted{Method::scholtes, Model::loglog, Contributors::all, PFilter::unfiltered, 330};
};

struct SuperlinearitySummary {
    std::vector<SummaryRow> rows;
    /// original, selection_adjusted, method_adjusted, both_adjusted.
    std::vector<HeadlineDifference> headline;
};

/// Superlinear share of determined projects per row, and the gap between the two
/// methods: on their own datasets (original), on the pooled datasets
/// (selection_adjusted), with the adjusted variants on their own datasets
/// (method_adjusted), and with the adjusted variants pooled (both_adjusted).
[[nodiscard]] SuperlinearitySummary superlinearity_summary(const CrossTable& cross, const SummaryRoles& roles = {});

}  // namespace gitscale
