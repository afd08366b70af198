// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.
//   acceptance [--replication <sornette manifest> <scholtes manifest> <records dir>]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gitscale/bias_lab.hpp"
#include "gitscale/cli.hpp"
#include "gitscale/edit_distance.hpp"
#include "gitscale/errors.hpp"
#include "gitscale/regression.hpp"
#include "gitscale/report.hpp"
#include "gitscale/stat_tests.hpp"
#include "gitscale/windows.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"
#include "toy_fixtures.hpp"

namespace fs = std::filesystem;
using namespace gitscale;
using testing_support::as_project;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

Outcome edit_distance_oracle() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> len(0, 16);
    // Mix ASCII with multi-byte code points so the comparison runs over code points.
    const std::u32string alphabet = U"abcdé漢🙂";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    auto text = [&] {
        std::u32string s(len(rng), U'a');
        for (auto& c : s) c = alphabet[pick(rng)];
        return s;
    };
    const auto start = std::chrono::steady_clock::now();
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = text();
        const auto b = text();
        if (levenshtein(a, b) != testing_support::oracle_levenshtein(a, b)) ++mismatches;
    }
    const double t = seconds_since(start);
    return check(mismatches == 0 && t < 5.0,
                 std::to_string(mismatches) + " mismatches in 1000 pairs, " + fmt("%.3f s", t));
}

Outcome regression_exactness() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> beta(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.01, 1000.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double b = beta(rng);
        const double c = scale(rng);
        std::vector<Point> pts;
        for (int x = 1; x <= 30; ++x) pts.push_back({std::log(x), std::log(c * std::pow(x, b))});
        worst = std::max(worst, std::fabs(ols_fit(pts).slope - b));
    }
    const std::vector<Point> flat{{1, 2}, {2, 2}, {3, 2}};
    const double p = ols_fit(flat).p_value;
    return check(worst <= 1e-9 && p == 1.0,
                 "max slope error " + fmt("%.3g", worst) + " over 100 power laws, zero-slope p = " + fmt("%g", p));
}

Outcome ols_oracle() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-5.0, 5.0);
    std::uniform_real_distribution<double> slope(-2.0, 2.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double b = slope(rng);
        std::vector<std::pair<double, double>> xy;
        std::vector<Point> pts;
        for (int i = 0; i < 20; ++i) {
            const double x = xs(rng);
            xy.emplace_back(x, 0.5 + b * x + noise(rng));
            pts.push_back({xy.back().first, xy.back().second});
        }
        const RegressionResult r = ols_fit(pts);
        const auto o = testing_support::oracle_ols(xy);
        worst = std::max({worst, std::fabs(r.slope - static_cast<double>(o.slope)),
                          std::fabs(r.stderr_slope - static_cast<double>(o.stderr_slope)),
                          std::fabs(r.p_value - static_cast<double>(o.p_value))});
    }
    return check(worst <= 1e-8, "max |slope, stderr, p| difference " + fmt("%.3g", worst) + " over 50 sets");
}

Outcome wilcoxon_exactness() {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> magnitude(-6, 6);
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    for (std::size_t n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 25; ++rep) {
            std::vector<double> d(n);
            for (auto& v : d) v = magnitude(rng) / 2.0;
            if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) d[0] = 1.0;
            const TestOutcome t = wilcoxon_signed_rank_differences(d);
            if (t.method != PValueMethod::exact || t.p_value != testing_support::oracle_wilcoxon_p(d)) ++mismatches;
            ++cases;
        }
    }
    const std::vector<double> six{1, 2, 3, 4, 5, 6};
    const double p6 = wilcoxon_signed_rank_differences(six).p_value;
    return check(mismatches == 0 && p6 == 0.03125, std::to_string(mismatches) + " mismatches in " +
                                                        std::to_string(cases) + " samples (n <= 12), six positive p = " +
                                                        fmt("%.17g", p6));
}

Outcome ks_correctness() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    std::uniform_int_distribution<int> value(0, 40);
    std::size_t mismatches = 0;
    for (int k = 0; k < 500; ++k) {
        std::vector<double> a(size(rng));
        std::vector<double> b(size(rng));
        for (auto& v : a) v = value(rng) / 4.0;
        for (auto& v : b) v = value(rng) / 4.0;
        if (ks_statistic(a, b) != testing_support::oracle_ks_d(a, b)) ++mismatches;
    }
    const std::vector<double> same{0.5, 1.5, 1.5, 2.0, 7.0};
    const TestOutcome t = ks_two_sample(same, same);
    return check(mismatches == 0 && t.statistic == 0.0 && t.p_value == 1.0,
                 std::to_string(mismatches) + " mismatches in 500 sample pairs, identical samples D = " +
                     fmt("%g", t.statistic) + ", p = " + fmt("%g", t.p_value));
}

Outcome window_arithmetic() {
    std::vector<CommitRecord> records;
    const Instant origin = testing_support::synthetic_origin();
    std::uint64_t serial = 0;
    for (int h = 0; h < 500 * 24; h += 13) {
        records.push_back(testing_support::make_record(++serial, "dev" + std::to_string(h % 5) + "@x.org",
                                                       origin + std::chrono::hours(h), 1 + h % 4));
    }
    const Instant end = origin + Days{500};
    const auto periods = build_sornette_periods(records, Measure::file_edits, end);
    bool ok = periods.size() == 2;
    for (const auto& p : periods) ok = ok && p.samples.size() <= 50;
    const auto samples = build_scholtes_samples(records, Measure::file_edits, end);
    const std::size_t expected_windows = (500 + 6) / 7;
    ok = ok && samples.size() == expected_windows;
    std::size_t misplaced = 0;
    for (const CommitRecord& r : records) {
        const auto containing = std::count_if(samples.begin(), samples.end(), [&](const WindowSample& s) {
            return r.timestamp >= s.window_start && r.timestamp < s.window_end;
        });
        if (containing != 1) ++misplaced;
    }
    ok = ok && misplaced == 0;
    return check(ok, std::to_string(periods.size()) + " periods, " + std::to_string(samples.size()) + "/" +
                         std::to_string(expected_windows) + " Scholtes windows, " + std::to_string(misplaced) +
                         " of " + std::to_string(records.size()) + " commits not in exactly one window");
}

Outcome p_filter_bias() {
    using testing_support::PeriodShape;
    std::vector<ProjectInput> cohort;
    for (int i = 0; i < 20; ++i) {
        // Half the projects get a flat middle period whose slope is not significant.
        std::vector<PeriodShape> shape{{1.3 + 0.01 * i, 0.05}, {1.2, 0.05}, {1.25, 0.05}};
        if (i % 2 == 0) shape[1] = PeriodShape{0.0, 0.0, true};
        cohort.push_back(as_project("cohort", "p" + std::to_string(i),
                                    testing_support::sornette_history(shape, 1000 + static_cast<std::uint64_t>(i))));
    }
    const MethodSpec filtered = MethodSpec::parse("sornette:loglog:all:p_filtered");
    const MethodSpec unfiltered = MethodSpec::parse("sornette:loglog:all:unfiltered");
    const std::vector<MethodSpec> specs{filtered, unfiltered};
    const CrossApplyResult r = cross_apply(cohort, specs, AnalysisOptions{}, 4);

    std::map<std::string, const ProjectScaling*> with;
    std::map<std::string, const ProjectScaling*> without;
    for (const ProjectScaling& s : r.scalings) (s.variant == filtered.variant() ? with : without)[s.project] = &s;
    std::size_t affected = 0;
    std::size_t lower = 0;
    std::size_t flips = 0;
    for (const auto& [project, f] : with) {
        const bool has_weak_period = std::any_of(f->period_betas.begin(), f->period_betas.end(), [](const PeriodBeta& p) {
            return p.fit && p.fit->p_value >= kDefaultPThreshold;
        });
        if (!has_weak_period) continue;
        ++affected;
        const ProjectScaling* u = without.at(project);
        if (f->coefficient && u->coefficient && *u->coefficient < *f->coefficient) ++lower;
        if (f->classification == Classification::superlinear && u->classification == Classification::sublinear) ++flips;
    }
    return check(affected > 0 && lower == affected && flips >= 1,
                 std::to_string(affected) + " affected projects, " + std::to_string(lower) +
                     " with lower unfiltered beta, " + std::to_string(flips) + " superlinear -> sublinear");
}

Outcome front_load_bias() {
    testing_support::ScholtesShape shape;
    shape.gamma = 0.2;
    shape.bulk_import = 50'000'000;
    const std::vector<ProjectInput> projects{as_project("bulk", "p", testing_support::scholtes_history(shape))};
    const std::vector<int> grid{0, 30};
    const SweepResult s = sweep_front_load_days(projects, grid, SweepOptions{});
    const auto a0 = s.alpha3[0][0];
    const auto a30 = s.alpha3[0][1];
    const bool ok = a0 && a30 && *a30 > *a0 && classify(a0, Method::scholtes) == Classification::sublinear &&
                    classify(a30, Method::scholtes) == Classification::superlinear;
    return check(ok, "alpha3(0) = " + format_number(a0) + ", alpha3(30) = " + format_number(a30));
}

Outcome first_period_robustness() {
    using testing_support::PeriodShape;
    const MethodSpec unfiltered = MethodSpec::parse("sornette:loglog:all:unfiltered");
    const std::vector<MethodSpec> specs{unfiltered};
    std::size_t above = 0;
    std::size_t runs = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::vector<ProjectInput> cohort;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const std::vector<PeriodShape> iid(4, PeriodShape{1.2, 0.3});
            cohort.push_back(as_project("iid", "p" + std::to_string(i),
                                        testing_support::sornette_history(iid, seed * 1000 + i)));
        }
        const CrossApplyResult r = cross_apply(cohort, specs, AnalysisOptions{}, 4);
        ++runs;
        try {
            if (drop_first_period_comparison(r.scalings, std::nullopt).outcome.p_value > 0.05) ++above;
        } catch (const DegeneratePairs&) {
            ++above;  // no difference at all
        }
    }
    return check(above >= 95, std::to_string(above) + " of " + std::to_string(runs) + " seeded cohorts with p > 0.05");
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = s.str();
    }
    return files;
}

Outcome determinism() {
    const auto start = std::chrono::steady_clock::now();
    testing_support::TempDir tmp;
    testing_support::import_toy_repo(testing_support::bundled_toy_fixtures(), tmp / "repo");
    const std::string repo = (tmp / "repo").string();
    {
        std::ofstream m(tmp / "toy.json");
        m << R"({"name": "toy", "projects": [)";
        const char* ends[] = {"2020-01-07", "2020-01-12", "2020-01-16", "2020-01-31"};
        for (int i = 0; i < 4; ++i) {
            m << (i ? "," : "") << R"({"id": "cut)" << i << R"(", "locator": ")" << repo
              << R"(", "start": "2020-01-01", "end": ")" << ends[i] << R"("})";
        }
        m << "]}";
    }
    std::vector<std::map<std::string, std::string>> outputs;
    std::ostringstream log;
    for (const char* jobs : {"1", "4", "1", "4"}) {
        const std::string out = (tmp / ("run" + std::to_string(outputs.size()))).string();
        const std::string manifest = (tmp / "toy.json").string();
        for (const std::vector<std::string>& args :
             {std::vector<std::string>{"mine", "--manifest", manifest, "--out", out, "--jobs", jobs},
              std::vector<std::string>{"analyze", "--manifest", manifest, "--out", out, "--jobs", jobs},
              std::vector<std::string>{"sweep", "--manifest", manifest, "--out", out, "--jobs", jobs}}) {
            const int code = run_cli(args, log, log);
            if (code != kExitOk) return check(false, args.front() + " exited " + std::to_string(code) + ": " + log.str());
        }
        outputs.push_back(snapshot(out));
    }
    const double t = seconds_since(start);
    const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs.front(); });
    return check(same && outputs.front().size() >= 10 && t < 60.0,
                 std::to_string(outputs.front().size()) + " output files " + (same ? "identical" : "DIFFER") +
                     " across 2 runs x jobs {1,4}, " + fmt("%.2f s", t));
}

struct Replication {
    fs::path sornette_manifest;
    fs::path scholtes_manifest;
    fs::path records;
};

Outcome replication(const std::optional<Replication>& inputs) {
    if (!inputs) return {Verdict::skip, "no manifests given (--replication <sornette> <scholtes> <records>)"};
    testing_support::TempDir tmp;
    std::ostringstream log;
    const int code = run_cli({"analyze", "--manifest", inputs->sornette_manifest.string(), "--manifest",
                              inputs->scholtes_manifest.string(), "--records", inputs->records.string(), "--out",
                              tmp.path().string(), "--jobs", "4"},
                             log, log);
    if (code != kExitOk) return check(false, "analyze exited " + std::to_string(code) + ": " + log.str());
    std::ifstream in(tmp / "crosstable.csv");
    std::ostringstream text;
    text << in.rdbuf();
    const CrossTable t = parse_crosstable_csv(text.str());
    const std::string sornette_ds = load_manifest(inputs->sornette_manifest).name;
    const std::string scholtes_ds = load_manifest(inputs->scholtes_manifest).name;
    const CrossRow* a = t.find("sornette", "loglog:all:p_filtered", scholtes_ds);
    const CrossRow* b = t.find("scholtes", "loglog:all:unfiltered", sornette_ds);
    if (!a || !b) return check(false, "cross table lacks the needed rows");
    const bool ok = 2 * a->superlinear > a->superlinear + a->sublinear && 2 * b->sublinear > b->superlinear + b->sublinear;
    return check(ok, "Sornette on " + scholtes_ds + ": " + std::to_string(a->superlinear) + " super / " +
                         std::to_string(a->sublinear) + " sub; Scholtes on " + sornette_ds + ": " +
                         std::to_string(b->superlinear) + " super / " + std::to_string(b->sublinear) + " sub");
}

}  // namespace

int main(int argc, char** argv) {
    std::optional<Replication> repl;
    const std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty()) {
        if (args.size() != 4 || args[0] != "--replication") {
            std::cerr << "usage: acceptance [--replication <sornette manifest> <scholtes manifest> <records dir>]\n";
            return 2;
        }
        repl = Replication{args[1], args[2], args[3]};
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"edit-distance oracle", edit_distance_oracle},
        {"regression exactness", regression_exactness},
        {"OLS oracle", ols_oracle},
        {"Wilcoxon exactness", wilcoxon_exactness},
        {"KS correctness", ks_correctness},
        {"window arithmetic", window_arithmetic},
        {"p-filter bias reproduction", p_filter_bias},
        {"front-load bias reproduction", front_load_bias},
        {"first-period robustness", first_period_robustness},
        {"determinism", determinism},
        {"replication directions (optional)", [&] { return replication(repl); }},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("threw: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        std::cout << tag << "  " << name << ": " << o.detail << std::endl;
        failures += o.verdict == Verdict::fail;
    }
    return failures == 0 ? 0 : 1;
}
