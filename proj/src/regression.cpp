#include "gitscale/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gitscale/distributions.hpp"
#include "gitscale/errors.hpp"

namespace gitscale {

RegressionResult ols_fit(std::span<const Point> points) {
    const std::size_t n = points.size();
    if (n < kMinRegressionPoints) {
        throw InsufficientData(std::to_string(n) + " points, need " + std::to_string(kMinRegressionPoints));
    }
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point& a, const Point& b) { return a.x < b.x; });
    if (lo->x == hi->x) throw InsufficientData("all x values are identical");

    const double count = static_cast<double>(n);
    double mx = 0.0;
    double my = 0.0;
    for (const Point& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const Point& p : points) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    RegressionResult r;
    r.n_points = n;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ssr = 0.0;
    for (const Point& p : points) {
        const double e = (p.y - my) - r.slope * (p.x - mx);
        ssr += e * e;
    }
    const double df = count - 2.0;
    r.stderr_slope = std::sqrt(ssr / df / sxx);
    r.r_value = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
    if (r.slope == 0.0) {
        r.p_value = 1.0;
    } else if (ssr == 0.0) {
        r.p_value = 0.0;
    } else {
        r.p_value = student_t_two_sided_p(r.slope / r.stderr_slope, df);
    }
    return r;
}

std::string_view to_string(Method m) { return m == Method::sornette ? "sornette" : "scholtes"; }
std::string_view to_string(Model m) { return m == Model::loglog ? "loglog" : "loglin"; }

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::sublinear:
            return "sublinear";
        case Classification::superlinear:
            return "superlinear";
        case Classification::undetermined:
            return "undetermined";
    }
    return "undetermined";
}

Method parse_method(std::string_view name) {
    if (name == "sornette") return Method::sornette;
    if (name == "scholtes") return Method::scholtes;
    throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

Model parse_model(std::string_view name) {
    if (name == "loglog") return Model::loglog;
    if (name == "loglin") return Model::loglin;
    throw InvalidArgument("unknown model '" + std::string(name) + "'");
}

Classification parse_classification(std::string_view name) {
    if (name == "sublinear") return Classification::sublinear;
    if (name == "superlinear") return Classification::superlinear;
    if (name == "undetermined") return Classification::undetermined;
    throw InvalidArgument("unknown classification '" + std::string(name) + "'");
}

std::optional<double> average_beta(std::span<const PeriodBeta> periods, std::optional<double> p_threshold,
                                   std::size_t* contributing) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const PeriodBeta& p : periods) {
        if (!p.fit) continue;
        if (p_threshold && !(p.fit->p_value < *p_threshold)) continue;
        sum += p.fit->slope;
        ++used;
    }
    if (contributing != nullptr) *contributing = used;
    if (used == 0) return std::nullopt;
    return sum / static_cast<double>(used);
}

ProjectScaling sornette_average_beta(std::span<const PeriodSamples> periods, std::optional<double> p_threshold) {
    ProjectScaling s;
    s.method = Method::sornette;
    s.variant = p_threshold ? "loglog:p_filtered" : "loglog:unfiltered";
    std::vector<Point> points;
    for (const PeriodSamples& period : periods) {
        PeriodBeta beta;
        beta.period_index = period.period_index;
        beta.n_windows = period.samples.size();
        points.clear();
        for (const WindowSample& w : period.samples) {
            points.push_back({std::log(static_cast<double>(w.team_size)), std::log(w.output)});
        }
        try {
            beta.fit = ols_fit(points);
        } catch (const InsufficientData&) {
        }
        s.period_betas.push_back(beta);
    }
    s.coefficient = average_beta(s.period_betas, p_threshold, &s.n_points);
    s.classification = classify(s.coefficient, Method::sornette);
    return s;
}

ProjectScaling scholtes_alpha3(std::span<const WindowSample> samples, Model model) {
    ProjectScaling s;
    s.method = Method::scholtes;
    s.variant = std::string(to_string(model));
    s.n_points = samples.size();
    std::vector<Point> points;
    points.reserve(samples.size());
    for (const WindowSample& w : samples) {
        const double size = static_cast<double>(w.team_size);
        points.push_back({model == Model::loglog ? std::log(size) : size, std::log(w.productivity)});
    }
    try {
        s.coefficient = ols_fit(points).slope;
    } catch (const InsufficientData&) {
        s.coefficient.reset();
    }
    s.classification = classify(s.coefficient, Method::scholtes);
    return s;
}

Classification classify(std::optional<double> coefficient, Method method) {
    if (!coefficient || std::isnan(*coefficient)) return Classification::undetermined;
    const double boundary = method == Method::sornette ? 1.0 : 0.0;
    return *coefficient > boundary ? Classification::superlinear : Classification::sublinear;
}

EffectiveTeamSize effective_team_size(std::span<const double> work) {
    if (work.empty()) throw InvalidArgument("effective team size needs at least one member");
    double total = 0.0;
    for (double w : work) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("work amounts must be finite and non-negative");
        total += w;
    }
    if (total == 0.0) throw InvalidArgument("effective team size is undefined when all work is zero");

    EffectiveTeamSize out;
    out.member_count = work.size();
    out.shares.reserve(work.size());
    double entropy = 0.0;
    for (double w : work) {
        const double f = w / total;
        out.shares.push_back(f);
        if (f > 0.0) entropy -= f * std::log2(f);
    }
    const bool uniform = std::all_of(work.begin(), work.end(), [&](double w) { return w == work.front(); });
    // exp2(log2(N)) can miss N by an ulp; uniform shares are N by definition.
    out.n_effective = uniform ? static_cast<double>(work.size())
                              : std::clamp(std::exp2(entropy), 1.0, static_cast<double>(work.size()));
    return out;
}

}  // namespace gitscale
