#include "gitscale/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gitscale/errors.hpp"

namespace gitscale {
namespace {

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string count(std::size_t n) { return std::to_string(n); }

// Pixel coordinates only; never data.
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string svg_open(int width, int height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, std::string_view content, std::string_view anchor = "middle") {
    return "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
           escape_xml(content) + "</text>\n";
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format_number(std::optional<double> value) { return value ? format_number(*value) : std::string{}; }

std::string to_csv(std::span<const CsvRow> rows) {
    std::string out;
    for (const CsvRow& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += quote(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string scaling_csv(std::span<const ProjectScaling> scalings) {
    std::vector<const ProjectScaling*> sorted;
    for (const auto& s : scalings) sorted.push_back(&s);
    std::stable_sort(sorted.begin(), sorted.end(), [](const ProjectScaling* a, const ProjectScaling* b) {
        if (a->project != b->project) return a->project < b->project;
        if (a->method != b->method) return to_string(a->method) < to_string(b->method);
        return a->variant < b->variant;
    });
    std::vector<CsvRow> rows{{"project", "method", "variant", "coefficient", "classification", "n_points"}};
    for (const ProjectScaling* s : sorted) {
        rows.push_back({s->project, std::string(to_string(s->method)), s->variant, format_number(s->coefficient),
                        std::string(to_string(s->classification)), count(s->n_points)});
    }
    return to_csv(rows);
}

std::string periods_csv(std::span<const ProjectScaling> sornette) {
    std::vector<const ProjectScaling*> sorted;
    for (const auto& s : sornette) sorted.push_back(&s);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ProjectScaling* a, const ProjectScaling* b) { return a->project < b->project; });
    std::vector<CsvRow> rows{{"project", "period_index", "beta", "p_value", "n_windows"}};
    for (const ProjectScaling* s : sorted) {
        std::vector<PeriodBeta> periods = s->period_betas;
        std::sort(periods.begin(), periods.end(),
                  [](const PeriodBeta& a, const PeriodBeta& b) { return a.period_index < b.period_index; });
        for (const PeriodBeta& p : periods) {
            rows.push_back({s->project, count(p.period_index),
                            p.fit ? format_number(p.fit->slope) : std::string{},
                            p.fit ? format_number(p.fit->p_value) : std::string{}, count(p.n_windows)});
        }
    }
    return to_csv(rows);
}

std::string crosstable_csv(const CrossTable& table) {
    std::vector<CsvRow> rows{{"method", "variant", "dataset", "sublinear", "superlinear", "undetermined", "total"}};
    for (const CrossRow& r : table.rows) {
        rows.push_back({r.method, r.variant, r.dataset, count(r.sublinear), count(r.superlinear), count(r.undetermined),
                        count(r.total)});
    }
    return to_csv(rows);
}

CrossTable parse_crosstable_csv(std::string_view text) {
    const std::vector<CsvRow> rows = parse_csv(text);
    const CsvRow header{"method", "variant", "dataset", "sublinear", "superlinear", "undetermined", "total"};
    if (rows.empty() || rows.front() != header) throw InvalidArgument("cross table CSV has an unexpected header");
    auto number = [](const std::string& s, std::size_t line) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw InvalidArgument("cross table CSV line " + std::to_string(line) + ": bad count '" + s + "'");
        }
        return v;
    };
    CrossTable table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& r = rows[i];
        if (r.size() != header.size()) {
            throw InvalidArgument("cross table CSV line " + std::to_string(i + 1) + ": wrong field count");
        }
        CrossRow row{r[0], r[1], r[2], number(r[3], i + 1), number(r[4], i + 1), number(r[5], i + 1), number(r[6], i + 1)};
        if (row.sublinear + row.superlinear + row.undetermined != row.total) {
            throw InvalidArgument("cross table CSV line " + std::to_string(i + 1) + ": counts do not add up to total");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::vector<CsvRow> rows{{"project", "front_load_days", "alpha3", "determined"}};
    for (std::size_t p = 0; p < sweep.projects.size(); ++p) {
        for (std::size_t k = 0; k < sweep.grid.size(); ++k) {
            const auto& v = sweep.alpha3[p][k];
            rows.push_back({sweep.projects[p], std::to_string(sweep.grid[k]), format_number(v), v ? "true" : "false"});
        }
    }
    return to_csv(rows);
}

std::string sweep_mean_csv(const SweepResult& sweep) {
    std::vector<CsvRow> rows{{"front_load_days", "mean_alpha3", "determined_projects"}};
    for (std::size_t k = 0; k < sweep.grid.size(); ++k) {
        rows.push_back({std::to_string(sweep.grid[k]), format_number(sweep.mean_alpha3[k]), count(sweep.determined[k])});
    }
    return to_csv(rows);
}

std::string compare_csv(std::span<const CompareRow> rows) {
    std::vector<CsvRow> out{{"experiment", "statistic", "p_value", "n_pairs", "mean_relative_change"}};
    for (const CompareRow& r : rows) {
        out.push_back({r.experiment, format_number(r.outcome.statistic), format_number(r.outcome.p_value),
                       count(r.outcome.n_effective), format_number(r.mean_relative_change)});
    }
    return to_csv(out);
}

std::string percent_label(std::optional<double> percent) {
    if (!percent) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *percent);
    return buf;
}

std::string summary_csv(const SuperlinearitySummary& summary) {
    std::vector<CsvRow> rows{{"method", "variant", "dataset", "superlinear", "determined", "percent", "percent_label"}};
    for (const SummaryRow& r : summary.rows) {
        rows.push_back({r.method, r.variant, r.dataset, count(r.superlinear), count(r.determined), format_number(r.percent),
                        percent_label(r.percent)});
    }
    return to_csv(rows);
}

std::string headline_csv(const SuperlinearitySummary& summary) {
    std::vector<CsvRow> rows{{"comparison", "sornette_percent", "scholtes_percent", "difference"}};
    for (const HeadlineDifference& h : summary.headline) {
        rows.push_back({h.name, format_number(h.sornette_percent), format_number(h.scholtes_percent),
                        format_number(h.difference)});
    }
    return to_csv(rows);
}

Histogram make_histogram(std::span<const double> values) {
    Histogram h;
    std::vector<double> edges;
    for (int k = 0; k <= Histogram::kBins; ++k) edges.push_back(Histogram::edge(k));
    for (double v : values) {
        if (v < edges.front()) {
            ++h.underflow;
        } else if (v >= edges.back()) {
            ++h.overflow;
        } else {
            const auto it = std::upper_bound(edges.begin(), edges.end(), v);
            ++h.counts[static_cast<std::size_t>(it - edges.begin() - 1)];
        }
    }
    return h;
}

std::string histogram_csv(std::span<const LabeledHistogram> histograms) {
    std::vector<CsvRow> rows{{"method", "variant", "bin_lower", "bin_upper", "count"}};
    for (const LabeledHistogram& lh : histograms) {
        const Histogram& h = lh.histogram;
        rows.push_back({lh.method, lh.variant, "-inf", format_number(Histogram::edge(0)), count(h.underflow)});
        for (int k = 0; k < Histogram::kBins; ++k) {
            rows.push_back({lh.method, lh.variant, format_number(Histogram::edge(k)), format_number(Histogram::edge(k + 1)),
                            count(h.counts[static_cast<std::size_t>(k)])});
        }
        rows.push_back({lh.method, lh.variant, format_number(Histogram::edge(Histogram::kBins)), "inf", count(h.overflow)});
    }
    return to_csv(rows);
}

std::string histogram_svg(const LabeledHistogram& lh) {
    const Histogram& h = lh.histogram;
    constexpr int width = 840;
    constexpr int height = 360;
    constexpr double left = 60.0;
    constexpr double bottom = 310.0;
    constexpr double plot_h = 260.0;
    constexpr double bar_w = 18.0;
    const std::size_t peak = std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));

    std::string svg = svg_open(width, height);
    svg += text(width / 2.0, 24, lh.method + " " + lh.variant);
    for (int k = 0; k < Histogram::kBins; ++k) {
        const std::size_t c = h.counts[static_cast<std::size_t>(k)];
        const double bar_h = plot_h * static_cast<double>(c) / static_cast<double>(peak);
        svg += "<rect x=\"" + px(left + k * bar_w) + "\" y=\"" + px(bottom - bar_h) + "\" width=\"" + px(bar_w - 1) +
               "\" height=\"" + px(bar_h) + "\" fill=\"#4477aa\"/>\n";
    }
    svg += "<line x1=\"" + px(left) + "\" y1=\"" + px(bottom) + "\" x2=\"" + px(left + Histogram::kBins * bar_w) +
           "\" y2=\"" + px(bottom) + "\" stroke=\"black\"/>\n";
    for (int k : {0, 15, 25, Histogram::kBins}) {
        svg += text(left + k * bar_w, bottom + 16, format_number(Histogram::edge(k)));
    }
    svg += text(left - 8, bottom - plot_h + 4, count(peak), "end");
    svg += text(left - 8, bottom + 4, "0", "end");
    svg += "</svg>\n";
    return svg;
}

std::string superlinearity_svg(const SuperlinearitySummary& summary) {
    const std::size_t n = summary.rows.size();
    constexpr double bar_w = 120.0;
    constexpr double gap = 30.0;
    constexpr double left = 50.0;
    constexpr double bottom = 330.0;
    constexpr double plot_h = 260.0;
    const int width = static_cast<int>(left * 2 + static_cast<double>(n) * (bar_w + gap));
    std::string svg = svg_open(std::max(width, 300), 420);
    svg += text(std::max(width, 300) / 2.0, 24, "Share of superlinear projects");
    for (std::size_t i = 0; i < n; ++i) {
        const SummaryRow& r = summary.rows[i];
        const double x = left + static_cast<double>(i) * (bar_w + gap);
        const double bar_h = r.percent ? plot_h * *r.percent / 100.0 : 0.0;
        svg += "<rect x=\"" + px(x) + "\" y=\"" + px(bottom - bar_h) + "\" width=\"" + px(bar_w) + "\" height=\"" +
               px(bar_h) + "\" fill=\"" + (r.method == "sornette" ? "#cc6677" : "#117733") + "\"/>\n";
        svg += text(x + bar_w / 2, bottom - bar_h - 6, percent_label(r.percent));
        svg += text(x + bar_w / 2, bottom + 16, r.method + " / " + r.dataset);
        svg += text(x + bar_w / 2, bottom + 32, r.variant);
    }
    svg += "</svg>\n";
    return svg;
}

std::string sweep_svg(const SweepResult& sweep) {
    constexpr int width = 720;
    constexpr int height = 360;
    constexpr double left = 80.0;
    constexpr double right = 680.0;
    constexpr double top = 50.0;
    constexpr double bottom = 300.0;
    std::vector<std::pair<int, double>> points;
    for (std::size_t k = 0; k < sweep.grid.size(); ++k) {
        if (sweep.mean_alpha3[k]) points.emplace_back(sweep.grid[k], *sweep.mean_alpha3[k]);
    }
    std::string svg = svg_open(width, height);
    svg += text(width / 2.0, 24, "Mean alpha3 by front-load days");
    if (!points.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(points.begin(), points.end(),
                                                        [](const auto& a, const auto& b) { return a.second < b.second; });
        const double lo = lo_it->second;
        const double hi = hi_it->second;
        const double span_y = hi > lo ? hi - lo : 1.0;
        const double first = sweep.grid.front();
        const double span_x = sweep.grid.back() > sweep.grid.front() ? sweep.grid.back() - first : 1.0;
        std::string poly;
        for (const auto& [d, v] : points) {
            const double x = left + (right - left) * (d - first) / span_x;
            const double y = bottom - (bottom - top) * (v - lo) / span_y;
            poly += px(x) + "," + px(y) + " ";
        }
        svg += "<polyline points=\"" + poly + "\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\"/>\n";
        svg += text(left - 6, top + 4, format_number(hi), "end");
        svg += text(left - 6, bottom + 4, format_number(lo), "end");
    }
    for (std::size_t k = 0; k < sweep.grid.size(); ++k) {
        const double span_x = sweep.grid.back() > sweep.grid.front() ? sweep.grid.back() - sweep.grid.front() : 1.0;
        const double x = left + (right - left) * (sweep.grid[k] - sweep.grid.front()) / span_x;
        svg += text(x, bottom + 18, std::to_string(sweep.grid[k]));
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace gitscale
