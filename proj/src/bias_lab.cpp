#include "gitscale/bias_lab.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

#include "gitscale/errors.hpp"
#include "parallel.hpp"

namespace gitscale {
namespace {

std::vector<std::string_view> split_colon(std::string_view s) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = s.find(':', start);
        parts.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) return parts;
        start = end + 1;
    }
}

ProjectScaling undetermined(const ProjectInput& project, const MethodSpec& spec) {
    ProjectScaling s;
    s.project = project.key();
    s.method = spec.method;
    s.variant = spec.variant();
    return s;
}

std::optional<double> percent_of(std::size_t superlinear, std::size_t determined) {
    if (determined == 0) return std::nullopt;
    return 100.0 * static_cast<double>(superlinear) / static_cast<double>(determined);
}

}  // namespace

std::string_view to_string(Contributors c) { return c == Contributors::all ? "all" : "no_one_timers"; }
std::string_view to_string(PFilter p) { return p == PFilter::p_filtered ? "p_filtered" : "unfiltered"; }

std::string MethodSpec::variant() const {
    std::string v = std::string(gitscale::to_string(model)) + ":" + std::string(gitscale::to_string(contributors)) +
                    ":" + std::string(gitscale::to_string(p_filter));
    if (front_load_days != 0) v += ":fl" + std::to_string(front_load_days);
    return v;
}

std::string MethodSpec::to_string() const { return std::string(gitscale::to_string(method)) + ":" + variant(); }

MethodSpec MethodSpec::parse(std::string_view text) {
    const std::vector<std::string_view> parts = split_colon(text);
    if (parts.size() != 4 && parts.size() != 5) {
        throw InvalidArgument("method spec '" + std::string(text) +
                              "' must look like method:model:contributors:pfilter[:fl<days>]");
    }
    MethodSpec spec;
    spec.method = parse_method(parts[0]);
    spec.model = parse_model(parts[1]);
    if (parts[2] == "all") {
        spec.contributors = Contributors::all;
    } else if (parts[2] == "no_one_timers") {
        spec.contributors = Contributors::no_one_timers;
    } else {
        throw InvalidArgument("unknown contributor setting '" + std::string(parts[2]) + "'");
    }
    if (parts[3] == "p_filtered") {
        spec.p_filter = PFilter::p_filtered;
    } else if (parts[3] == "unfiltered") {
        spec.p_filter = PFilter::unfiltered;
    } else {
        throw InvalidArgument("unknown p-filter setting '" + std::string(parts[3]) + "'");
    }
    if (parts.size() == 5) {
        const std::string_view fl = parts[4];
        int days = -1;
        if (fl.size() < 3 || fl.substr(0, 2) != "fl" ||
            std::from_chars(fl.data() + 2, fl.data() + fl.size(), days).ptr != fl.data() + fl.size() || days < 0) {
            throw InvalidArgument("front-load suffix must be fl<days>, got '" + std::string(fl) + "'");
        }
        spec.front_load_days = days;
    }
    if (spec.method == Method::sornette && spec.model == Model::loglin) {
        throw InvalidArgument("Sornette's method is defined for log-log regressions only");
    }
    if (spec.method == Method::scholtes && spec.p_filter == PFilter::p_filtered) {
        throw InvalidArgument("Scholtes' method has no p-value filter");
    }
    return spec;
}

Measure measure_for(Method method, const AnalysisOptions& options) {
    if (options.measure) return *options.measure;
    return method == Method::sornette ? Measure::file_edits : Measure::levenshtein;
}

std::vector<CommitRecord> prepare_records(const ProjectInput& project, const MethodSpec& spec,
                                          const AnalysisOptions& options) {
    if (!project.records) return {};
    const Instant from = start_of(project.entry.start);
    const Instant until = end_of(project.entry.end);
    std::vector<CommitRecord> records;
    for (const CommitRecord& r : *project.records) {
        if (r.timestamp >= from && r.timestamp < until) records.push_back(r);
    }
    if (options.outlier_fraction > 0.0) records = trim_levenshtein_outliers(records, options.outlier_fraction);
    if (spec.contributors == Contributors::no_one_timers) records = filter_one_time_contributors(records);
    if (spec.front_load_days > 0) records = apply_front_load_filter(records, Days{spec.front_load_days});
    return records;
}

ProjectScaling evaluate_project(const ProjectInput& project, const MethodSpec& spec, const AnalysisOptions& options) {
    if (spec.p_filter == PFilter::p_filtered && !options.p_threshold) {
        throw InvalidArgument("variant " + spec.to_string() + " needs a p threshold");
    }
    const std::vector<CommitRecord> records = prepare_records(project, spec, options);
    if (records.empty()) return undetermined(project, spec);

    const Instant end = end_of(project.entry.end);
    const Measure measure = measure_for(spec.method, options);
    ProjectScaling s;
    if (spec.method == Method::sornette) {
        const auto periods = build_sornette_periods(records, measure, end);
        s = sornette_average_beta(
            periods, spec.p_filter == PFilter::p_filtered ? options.p_threshold : std::optional<double>{});
    } else {
        const auto samples = build_scholtes_samples(records, measure, end);
        s = scholtes_alpha3(samples, spec.model);
    }
    s.project = project.key();
    s.variant = spec.variant();
    return s;
}

const CrossRow* CrossTable::find(std::string_view method, std::string_view variant, std::string_view dataset) const {
    for (const CrossRow& r : rows) {
        if (r.method == method && r.variant == variant && r.dataset == dataset) return &r;
    }
    return nullptr;
}

CrossApplyResult cross_apply(std::span<const ProjectInput> projects, std::span<const MethodSpec> specs,
                             const AnalysisOptions& options, std::size_t jobs) {
    std::vector<std::size_t> order(projects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return projects[a].key() < projects[b].key(); });

    std::vector<std::vector<ProjectScaling>> per_project(projects.size());
    detail::parallel_for(projects.size(), jobs, [&](std::size_t i) {
        auto& out = per_project[i];
        for (const MethodSpec& spec : specs) out.push_back(evaluate_project(projects[i], spec, options));
    });

    CrossApplyResult result;
    for (const ProjectInput& p : projects) {
        if (!p.records) {
            result.warnings.push_back("project " + p.key() + ": no commit records, marked undetermined");
        }
    }

    std::vector<std::string> datasets;
    std::vector<std::size_t> dataset_of(projects.size());
    for (std::size_t i = 0; i < projects.size(); ++i) {
        auto it = std::find(datasets.begin(), datasets.end(), projects[i].dataset);
        if (it == datasets.end()) it = datasets.insert(datasets.end(), projects[i].dataset);
        dataset_of[i] = static_cast<std::size_t>(it - datasets.begin());
    }
    for (const MethodSpec& spec : specs) {
        for (const std::string& ds : datasets) {
            result.table.rows.push_back({std::string(to_string(spec.method)), spec.variant(), ds});
        }
    }
    for (std::size_t i = 0; i < projects.size(); ++i) {
        for (std::size_t k = 0; k < specs.size(); ++k) {
            CrossRow& row = result.table.rows[k * datasets.size() + dataset_of[i]];
            ++row.total;
            switch (per_project[i][k].classification) {
                case Classification::sublinear:
                    ++row.sublinear;
                    break;
                case Classification::superlinear:
                    ++row.superlinear;
                    break;
                case Classification::undetermined:
                    ++row.undetermined;
                    break;
            }
        }
    }
    for (std::size_t i : order) {
        for (ProjectScaling& s : per_project[i]) result.scalings.push_back(std::move(s));
    }
    return result;
}

PairedComparison p_filter_comparison(std::span<const ProjectScaling> filtered,
                                     std::span<const ProjectScaling> unfiltered) {
    std::map<std::string, double> other;
    for (const ProjectScaling& s : unfiltered) {
        if (s.coefficient) other.emplace(s.project, *s.coefficient);
    }
    std::map<std::string, std::pair<double, double>> pairs;
    for (const ProjectScaling& s : filtered) {
        if (!s.coefficient) continue;
        if (const auto it = other.find(s.project); it != other.end()) pairs.emplace(s.project, std::pair{*s.coefficient, it->second});
    }
    if (pairs.empty()) throw InsufficientData("no project is determined both with and without the p filter");

    PairedComparison out;
    std::vector<std::pair<double, double>> values;
    double relative = 0.0;
    for (const auto& [key, v] : pairs) {
        out.projects.push_back(key);
        out.first.push_back(v.first);
        out.second.push_back(v.second);
        values.push_back(v);
        relative += (v.first - v.second) / v.first;
    }
    out.mean_relative_change = relative / static_cast<double>(pairs.size());
    out.outcome = wilcoxon_signed_rank(values);
    return out;
}

PairedComparison p_filter_comparison(std::span<const ProjectInput> projects, const AnalysisOptions& options,
                                     std::size_t jobs) {
    const MethodSpec filtered{Method::sornette, Model::loglog, Contributors::all, PFilter::p_filtered, 0};
    const MethodSpec unfiltered{Method::sornette, Model::loglog, Contributors::all, PFilter::unfiltered, 0};
    const MethodSpec specs[] = {filtered, unfiltered};
    const CrossApplyResult run = cross_apply(projects, specs, options, jobs);
    std::vector<ProjectScaling> with_filter;
    std::vector<ProjectScaling> without_filter;
    for (const ProjectScaling& s : run.scalings) {
        (s.variant == filtered.variant() ? with_filter : without_filter).push_back(s);
    }
    return p_filter_comparison(with_filter, without_filter);
}

PairedComparison drop_first_period_comparison(std::span<const ProjectScaling> sornette,
                                              std::optional<double> p_threshold) {
    std::map<std::string, std::pair<double, double>> pairs;
    for (const ProjectScaling& s : sornette) {
        if (s.method != Method::sornette || s.period_betas.size() < 2) continue;
        std::vector<PeriodBeta> later;
        std::copy_if(s.period_betas.begin(), s.period_betas.end(), std::back_inserter(later),
                     [](const PeriodBeta& p) { return p.period_index != 0; });
        const auto original = average_beta(s.period_betas, p_threshold);
        const auto without_first = average_beta(later, p_threshold);
        if (original && without_first) pairs.emplace(s.project, std::pair{*original, *without_first});
    }
    if (pairs.empty()) throw InsufficientData("no project has two or more usable 250-day periods");

    PairedComparison out;
    std::vector<std::pair<double, double>> values;
    double relative = 0.0;
    for (const auto& [key, v] : pairs) {
        out.projects.push_back(key);
        out.first.push_back(v.first);
        out.second.push_back(v.second);
        values.push_back(v);
        relative += (v.first - v.second) / v.first;
    }
    out.mean_relative_change = relative / static_cast<double>(pairs.size());
    out.outcome = wilcoxon_signed_rank(values);
    return out;
}

std::vector<int> default_front_load_grid() {
    std::vector<int> grid;
    for (int d = 0; d <= 720; d += 30) grid.push_back(d);
    return grid;
}

SweepResult sweep_front_load_days(std::span<const ProjectInput> projects, std::span<const int> grid,
                                  const SweepOptions& options, std::size_t jobs) {
    if (grid.empty()) throw InvalidArgument("front-load grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < 0) throw InvalidArgument("front-load days must be non-negative");
        if (k > 0 && grid[k] <= grid[k - 1]) throw InvalidArgument("front-load grid must be strictly ascending");
    }
    std::vector<std::size_t> order(projects.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return projects[a].key() < projects[b].key(); });

    SweepResult result;
    result.grid.assign(grid.begin(), grid.end());
    result.alpha3.resize(projects.size());
    detail::parallel_for(order.size(), jobs, [&](std::size_t slot) {
        const ProjectInput& project = projects[order[slot]];
        auto& row = result.alpha3[slot];
        for (int days : grid) {
            const MethodSpec spec{Method::scholtes, options.model, options.contributors, PFilter::unfiltered, days};
            row.push_back(evaluate_project(project, spec, options.analysis).coefficient);
        }
    });
    for (std::size_t i : order) result.projects.push_back(projects[i].key());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& row : result.alpha3) {
            if (row[k]) {
                sum += *row[k];
                ++count;
            }
        }
        result.determined.push_back(count);
        result.mean_alpha3.push_back(count == 0 ? std::nullopt : std::optional<double>{sum / static_cast<double>(count)});
    }
    return result;
}

SuperlinearitySummary superlinearity_summary(const CrossTable& cross, const SummaryRoles& roles) {
    SuperlinearitySummary out;
    for (const CrossRow& r : cross.rows) {
        const std::size_t determined = r.total - r.undetermined;
        out.rows.push_back({r.method, r.variant, r.dataset, r.superlinear, determined, percent_of(r.superlinear, determined)});
    }
    // An empty dataset name pools every dataset for that method variant.
    auto share = [&cross](const MethodSpec& spec, const std::string& dataset) -> std::optional<double> {
        const std::string method(to_string(spec.method));
        const std::string variant = spec.variant();
        std::size_t superlinear = 0;
        std::size_t determined = 0;
        bool seen = false;
        for (const CrossRow& r : cross.rows) {
            if (r.method != method || r.variant != variant) continue;
            if (!dataset.empty() && r.dataset != dataset) continue;
            seen = true;
            superlinear += r.superlinear;
            determined += r.total - r.undetermined;
        }
        if (!seen) return std::nullopt;
        return percent_of(superlinear, determined);
    };
    auto headline = [&](std::string name, const MethodSpec& sornette, const MethodSpec& scholtes,
                        const std::string& sornette_ds, const std::string& scholtes_ds) {
        HeadlineDifference h{std::move(name), share(sornette, sornette_ds), share(scholtes, scholtes_ds), std::nullopt};
        if (h.sornette_percent && h.scholtes_percent) h.difference = *h.sornette_percent - *h.scholtes_percent;
        out.headline.push_back(std::move(h));
    };
    headline("original", roles.sornette_original, roles.scholtes_original, roles.sornette_dataset, roles.scholtes_dataset);
    headline("selection_adjusted", roles.sornette_original, roles.scholtes_original, "", "");
    headline("method_adjusted", roles.sornette_adjusted, roles.scholtes_adjusted, roles.sornette_dataset,
             roles.scholtes_dataset);
    headline("both_adjusted", roles.sornette_adjusted, roles.scholtes_adjusted, "", "");
    return out;
}

}  // namespace gitscale
