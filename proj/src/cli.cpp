#include "gitscale/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gitscale/bias_lab.hpp"
#include "gitscale/commit_record.hpp"
#include "gitscale/config.hpp"
#include "gitscale/errors.hpp"
#include "gitscale/manifest.hpp"
#include "gitscale/miner.hpp"
#include "gitscale/report.hpp"
#include "gitscale/stat_tests.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace gitscale {
namespace {

struct Flags {
    std::string config;
    std::string out;
    std::size_t jobs = 0;

    std::string locator;
    std::string cutoff;
    std::vector<std::string> manifests;
    std::string records;
    std::vector<std::string> inputs;
    std::vector<std::string> methods;
    std::string p_threshold;
    std::string measure;
    std::optional<double> trim;
    std::string grid;
    std::string model;
    bool one_timers = false;
    std::vector<std::string> experiments;
    std::string sornette_dataset = "sornette";
    std::string scholtes_dataset = "scholtes";
};

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    f << content;
    if (!f.flush()) throw InvalidArgument("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot read " + path.string() + "; run the command that produces it first");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> grid;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidArgument("grid value '" + item + "' is not an integer");
        grid.push_back(v);
    }
    if (grid.empty()) throw InvalidArgument("grid must list at least one day count");
    return grid;
}

RunConfig resolve_config(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.out.empty()) c.output_dir = f.out;
    if (f.jobs != 0) c.jobs = f.jobs;
    if (!f.manifests.empty()) c.manifests.assign(f.manifests.begin(), f.manifests.end());
    if (!f.records.empty()) c.records_dir = f.records;
    if (!f.methods.empty()) {
        c.methods.clear();
        for (const auto& m : f.methods) c.methods.push_back(MethodSpec::parse(m));
    }
    if (!f.p_threshold.empty()) {
        if (f.p_threshold == "none") {
            c.p_threshold.reset();
        } else {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(f.p_threshold, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != f.p_threshold.size()) {
                throw InvalidArgument("--p-threshold must be a number or 'none'");
            }
            c.p_threshold = v;
        }
    }
    if (!f.measure.empty()) c.measure = parse_measure(f.measure);
    if (f.trim) c.outlier_fraction = *f.trim;
    if (!f.grid.empty()) c.front_load_grid = parse_grid(f.grid);
    if (!f.model.empty()) c.sweep_model = parse_model(f.model);
    if (f.one_timers) c.one_timer_filter = true;
    validate(c);
    return c;
}

fs::path record_path(const fs::path& records_dir, const std::string& dataset, const std::string& id) {
    return records_dir / dataset / (id + ".jsonl");
}

fs::path report_path(const fs::path& records) {
    fs::path p = records;
    p.replace_extension(".report.json");
    return p;
}

/// Projects from the manifests plus any ad-hoc record files. Missing record files
/// become warnings; having no usable records at all is an input error.
std::vector<ProjectInput> load_projects(const RunConfig& c, const Flags& f, std::ostream& err) {
    std::vector<ProjectInput> projects;
    std::vector<fs::path> paths;
    for (const fs::path& m : c.manifests) {
        const DatasetManifest manifest = load_manifest(m);
        for (const ProjectEntry& e : manifest.projects) {
            projects.push_back({manifest.name, e, nullptr});
            paths.push_back(record_path(c.effective_records_dir(), manifest.name, e.id));
        }
    }
    const std::size_t from_manifests = projects.size();
    for (const std::string& input : f.inputs) {
        ProjectEntry e;
        e.id = fs::path(input).stem().string();
        e.locator = input;
        projects.push_back({"input", e, nullptr});
        paths.push_back(input);
    }
    if (projects.empty()) throw InvalidArgument("no projects: pass --manifest or --input");

    std::vector<std::optional<std::string>> missing(projects.size());
    detail::parallel_for(projects.size(), c.jobs, [&](std::size_t i) {
        if (!fs::exists(paths[i])) {
            missing[i] = paths[i].string();
            return;
        }
        auto records = std::make_shared<std::vector<CommitRecord>>(load_records(paths[i]));
        if (i >= from_manifests) {
            if (records->empty()) throw InvalidArgument(paths[i].string() + " holds no records");
            projects[i].entry.start = Date{std::chrono::floor<Days>(records->front().timestamp)};
            projects[i].entry.end = Date{std::chrono::floor<Days>(records->back().timestamp)};
        }
        projects[i].records = std::move(records);
    });
    std::size_t usable = 0;
    for (std::size_t i = 0; i < projects.size(); ++i) {
        if (missing[i]) {
            err << "warning: no record file for " << projects[i].key() << " (" << *missing[i] << ")\n";
        } else {
            ++usable;
        }
    }
    if (usable == 0) throw InvalidArgument("none of the record files exist; run `gitscale mine` first");
    return projects;
}

int cmd_mine(const Flags& f, bool out_given, std::ostream& err) {
    if (!f.locator.empty() && !f.manifests.empty()) {
        throw InvalidArgument("mine takes either a repository or --manifest, not both");
    }
    if (!f.locator.empty()) {
        if (f.cutoff.empty()) throw InvalidArgument("mine needs --cutoff YYYY-MM-DD");
        if (!out_given) throw InvalidArgument("mine needs --out <file>");
        const Date cutoff = parse_date(f.cutoff);
        const fs::path out = f.out;
        const MiningResult result = extract_commits(f.locator, cutoff, out.stem().string());
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        persist_records(result.records, out);
        write_file(report_path(out), report_to_json(result.report));
        err << "mined " << result.records.size() << " commits into " << out.string() << "\n";
        return kExitOk;
    }
    const RunConfig c = resolve_config(f);
    if (c.manifests.empty()) throw InvalidArgument("mine needs a repository or --manifest");
    struct Job {
        std::string dataset;
        ProjectEntry entry;
    };
    std::vector<Job> jobs;
    for (const fs::path& m : c.manifests) {
        const DatasetManifest manifest = load_manifest(m);
        for (const ProjectEntry& e : manifest.projects) jobs.push_back({manifest.name, e});
    }
    std::vector<std::optional<MiningResult>> results(jobs.size());
    std::vector<std::string> failures(jobs.size());
    detail::parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
        try {
            results[i] = extract_commits(jobs[i].entry.locator, jobs[i].entry.end, jobs[i].entry.id);
        } catch (const RepositoryError& e) {
            failures[i] = e.what();
        }
    });
    std::size_t failed = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string key = jobs[i].dataset + "/" + jobs[i].entry.id;
        if (!results[i]) {
            ++failed;
            err << "error: " << key << ": " << failures[i] << "\n";
            continue;
        }
        const fs::path out = record_path(c.effective_records_dir(), jobs[i].dataset, jobs[i].entry.id);
        fs::create_directories(out.parent_path());
        persist_records(results[i]->records, out);
        write_file(report_path(out), report_to_json(results[i]->report));
        err << "mined " << key << ": " << results[i]->records.size() << " commits\n";
    }
    return failed == 0 ? kExitOk : kExitUsage;
}

int cmd_analyze(const Flags& f, std::ostream& err) {
    const RunConfig c = resolve_config(f);
    const std::vector<ProjectInput> projects = load_projects(c, f, err);
    const CrossApplyResult result = cross_apply(projects, c.methods, c.analysis_options(), c.jobs);
    for (const std::string& w : result.warnings) err << "warning: " << w << "\n";

    std::vector<ProjectScaling> sornette;
    const auto first_sornette = std::find_if(c.methods.begin(), c.methods.end(),
                                             [](const MethodSpec& m) { return m.method == Method::sornette; });
    if (first_sornette != c.methods.end()) {
        const std::string variant = first_sornette->variant();
        for (const ProjectScaling& s : result.scalings) {
            if (s.method == Method::sornette && s.variant == variant) sornette.push_back(s);
        }
    }
    write_file(c.output_dir / "scaling.csv", scaling_csv(result.scalings));
    write_file(c.output_dir / "periods.csv", periods_csv(sornette));
    write_file(c.output_dir / "crosstable.csv", crosstable_csv(result.table));
    err << "analysed " << projects.size() << " projects with " << c.methods.size() << " method variants into "
        << c.output_dir.string() << "\n";
    return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& err) {
    const RunConfig c = resolve_config(f);
    const std::vector<ProjectInput> projects = load_projects(c, f, err);
    const SweepResult sweep = sweep_front_load_days(projects, c.front_load_grid, c.sweep_options(), c.jobs);
    write_file(c.output_dir / "sweep.csv", sweep_csv(sweep));
    write_file(c.output_dir / "sweep_mean.csv", sweep_mean_csv(sweep));
    write_file(c.output_dir / "sweep.svg", sweep_svg(sweep));
    err << "swept " << sweep.grid.size() << " front-load settings over " << sweep.projects.size() << " projects\n";
    return kExitOk;
}

int cmd_compare(const Flags& f, std::ostream& err) {
    const RunConfig c = resolve_config(f);
    const std::vector<ProjectInput> projects = load_projects(c, f, err);
    const AnalysisOptions options = c.analysis_options();
    std::vector<std::string> wanted = f.experiments;
    if (wanted.empty()) wanted = {"p_filter", "drop_first_period", "ks"};
    for (const std::string& w : wanted) {
        if (w != "p_filter" && w != "drop_first_period" && w != "ks") {
            throw InvalidArgument("unknown experiment '" + w + "' (p_filter, drop_first_period, ks)");
        }
    }
    auto want = [&](std::string_view name) { return std::find(wanted.begin(), wanted.end(), name) != wanted.end(); };

    std::vector<std::string> datasets;
    for (const ProjectInput& p : projects) {
        if (std::find(datasets.begin(), datasets.end(), p.dataset) == datasets.end()) datasets.push_back(p.dataset);
    }
    auto of_dataset = [&](const std::string& ds) {
        std::vector<ProjectInput> subset;
        for (const ProjectInput& p : projects) {
            if (p.dataset == ds) subset.push_back(p);
        }
        return subset;
    };

    std::vector<CompareRow> rows;
    std::vector<std::string> failures;
    auto attempt = [&](const std::string& name, auto&& run) {
        try {
            rows.push_back(run());
            rows.back().experiment = name;
        } catch (const DegeneratePairs& e) {
            failures.push_back(name + ": " + e.what());
        } catch (const InsufficientData& e) {
            failures.push_back(name + ": " + e.what());
        }
    };

    for (const std::string& ds : datasets) {
        const std::vector<ProjectInput> subset = of_dataset(ds);
        if (want("p_filter")) {
            attempt("p_filter/" + ds, [&] {
                const PairedComparison cmp = p_filter_comparison(subset, options, c.jobs);
                return CompareRow{{}, cmp.outcome, cmp.mean_relative_change};
            });
        }
        if (want("drop_first_period")) {
            attempt("drop_first_period/" + ds, [&] {
                const MethodSpec spec{Method::sornette, Model::loglog, Contributors::all, PFilter::unfiltered, 0};
                const CrossApplyResult r = cross_apply(subset, std::span<const MethodSpec>(&spec, 1), options, c.jobs);
                const PairedComparison cmp = drop_first_period_comparison(r.scalings, c.p_threshold);
                return CompareRow{{}, cmp.outcome, cmp.mean_relative_change};
            });
        }
    }
    if (want("ks") && datasets.size() >= 2) {
        const CrossApplyResult r = cross_apply(projects, c.methods, options, c.jobs);
        std::map<std::string, std::string> dataset_of;
        for (const ProjectInput& p : projects) dataset_of[p.key()] = p.dataset;
        for (const MethodSpec& spec : c.methods) {
            for (std::size_t a = 0; a < datasets.size(); ++a) {
                for (std::size_t b = a + 1; b < datasets.size(); ++b) {
                    std::vector<double> first;
                    std::vector<double> second;
                    for (const ProjectScaling& s : r.scalings) {
                        if (s.method != spec.method || s.variant != spec.variant() || !s.coefficient) continue;
                        const std::string& ds = dataset_of[s.project];
                        if (ds == datasets[a]) first.push_back(*s.coefficient);
                        if (ds == datasets[b]) second.push_back(*s.coefficient);
                    }
                    attempt("ks/" + datasets[a] + "_vs_" + datasets[b] + "/" + spec.to_string(), [&] {
                        return CompareRow{{}, ks_two_sample(first, second), std::nullopt};
                    });
                }
            }
        }
    }
    write_file(c.output_dir / "compare.csv", compare_csv(rows));
    for (const std::string& failure : failures) err << "error: " << failure << "\n";
    if (!failures.empty()) return kExitDegenerate;
    err << "ran " << rows.size() << " comparisons\n";
    return kExitOk;
}

int cmd_report(const Flags& f, std::ostream& err) {
    const RunConfig c = resolve_config(f);
    const CrossTable table = parse_crosstable_csv(read_file(c.output_dir / "crosstable.csv"));
    SummaryRoles roles;
    roles.sornette_dataset = f.sornette_dataset;
    roles.scholtes_dataset = f.scholtes_dataset;
    const SuperlinearitySummary summary = superlinearity_summary(table, roles);
    write_file(c.output_dir / "summary.csv", summary_csv(summary));
    write_file(c.output_dir / "headline.csv", headline_csv(summary));
    write_file(c.output_dir / "superlinearity.svg", superlinearity_svg(summary));

    const fs::path scaling = c.output_dir / "scaling.csv";
    if (!fs::exists(scaling)) {
        err << "warning: " << scaling.string() << " not found; skipping histograms\n";
        return kExitOk;
    }
    const std::vector<CsvRow> rows = parse_csv(read_file(scaling));
    const CsvRow header{"project", "method", "variant", "coefficient", "classification", "n_points"};
    if (rows.empty() || rows.front() != header) throw InvalidArgument(scaling.string() + " has an unexpected header");
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> values;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& r = rows[i];
        if (r.size() != header.size()) throw InvalidArgument(scaling.string() + ": malformed row " + std::to_string(i + 1));
        const auto key = std::make_pair(r[1], r[2]);
        if (!values.contains(key)) order.push_back(key);
        auto& bucket = values[key];
        if (r[3].empty()) continue;
        try {
            bucket.push_back(std::stod(r[3]));
        } catch (const std::exception&) {
            throw InvalidArgument(scaling.string() + ": bad coefficient on row " + std::to_string(i + 1));
        }
    }
    std::sort(order.begin(), order.end());
    std::vector<LabeledHistogram> histograms;
    for (const auto& key : order) histograms.push_back({key.first, key.second, make_histogram(values[key])});
    write_file(c.output_dir / "histogram.csv", histogram_csv(histograms));
    for (const LabeledHistogram& h : histograms) {
        std::string name = "histogram_" + h.method + "_" + h.variant + ".svg";
        std::replace(name.begin(), name.end(), ':', '_');
        write_file(c.output_dir / name, histogram_svg(h));
    }
    err << "wrote summary and " << histograms.size() << " histograms into " << c.output_dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Team-size scaling analysis of git histories"};
    app.name("gitscale");
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "JSON run configuration");
    auto* out_opt = app.add_option("--out", f.out, "Output directory (for `mine <repo>`: the record file)");
    app.add_option("--jobs", f.jobs, "Parallel workers")->check(CLI::PositiveNumber);

    auto add_inputs = [&f](CLI::App* cmd) {
        cmd->add_option("--manifest", f.manifests, "Dataset manifest (repeatable)");
        cmd->add_option("--records", f.records, "Directory of mined record files");
        cmd->add_option("--input", f.inputs, "Single record file analysed as its own project (repeatable)");
        cmd->add_option("--p-threshold", f.p_threshold, "Significance cut for period betas, or 'none'");
        cmd->add_option("--measure", f.measure, "Output measure: file_edits or levenshtein");
        cmd->add_option("--trim", f.trim, "Share trimmed from each tail of commit edit distances");
    };

    auto* mine = app.add_subcommand("mine", "Extract commit records from a repository or a manifest");
    mine->add_option("repository", f.locator, "Repository path or URL");
    mine->add_option("--cutoff", f.cutoff, "Last day to include (YYYY-MM-DD)");
    mine->add_option("--manifest", f.manifests, "Mine every project of a manifest (repeatable)");
    mine->add_option("--records", f.records, "Directory for record files in manifest mode");

    auto* analyze = app.add_subcommand("analyze", "Fit scaling coefficients and count classifications");
    add_inputs(analyze);
    analyze->add_option("--method", f.methods, "Method spec, e.g. scholtes:loglog:all:unfiltered (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "Recompute alpha3 over a range of front-load days");
    add_inputs(sweep);
    sweep->add_option("--grid", f.grid, "Comma-separated front-load day counts");
    sweep->add_option("--model", f.model, "loglog or loglin");
    sweep->add_flag("--one-timers", f.one_timers, "Drop one-time contributors first");

    auto* compare = app.add_subcommand("compare", "Paired and distribution tests between settings");
    add_inputs(compare);
    compare->add_option("--method", f.methods, "Method spec for distribution tests (repeatable)");
    compare->add_option("--experiment", f.experiments, "p_filter, drop_first_period or ks (repeatable)");

    auto* report = app.add_subcommand("report", "Summaries and charts from analysis output");
    report->add_option("--sornette-dataset", f.sornette_dataset, "Dataset mined for the Sornette study");
    report->add_option("--scholtes-dataset", f.scholtes_dataset, "Dataset mined for the Scholtes study");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (mine->parsed()) return cmd_mine(f, out_opt->count() > 0, err);
        if (analyze->parsed()) return cmd_analyze(f, err);
        if (sweep->parsed()) return cmd_sweep(f, err);
        if (compare->parsed()) return cmd_compare(f, err);
        if (report->parsed()) return cmd_report(f, err);
    } catch (const DegeneratePairs& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace gitscale
