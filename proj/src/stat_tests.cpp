#include "gitscale/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gitscale/distributions.hpp"
#include "gitscale/errors.hpp"

namespace gitscale {
namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " contains a non-finite value");
    }
}

}  // namespace

std::string_view to_string(PValueMethod m) { return m == PValueMethod::exact ? "exact" : "approximate"; }

TestOutcome wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> differences;
    differences.reserve(pairs.size());
    for (const auto& [a, b] : pairs) differences.push_back(a - b);
    return wilcoxon_signed_rank_differences(differences);
}

TestOutcome wilcoxon_signed_rank_differences(std::span<const double> differences) {
    require_finite(differences, "differences");
    std::vector<double> d;
    for (double v : differences) {
        if (v != 0.0) d.push_back(v);
    }
    if (d.empty()) throw DegeneratePairs("all paired differences are zero");
    std::sort(d.begin(), d.end(), [](double x, double y) { return std::fabs(x) < std::fabs(y); });

    // Ranks are kept doubled so midranks stay integral.
    const std::size_t n = d.size();
    std::vector<std::uint32_t> doubled_rank(n);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::fabs(d[j + 1]) == std::fabs(d[i])) ++j;
        for (std::size_t k = i; k <= j; ++k) doubled_rank[k] = static_cast<std::uint32_t>(i + 1 + j + 1);
        tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;
    for (std::size_t k = 0; k < n; ++k) (d[k] > 0 ? plus : minus) += doubled_rank[k];
    const std::uint64_t smaller = std::min(plus, minus);

    TestOutcome out;
    out.statistic = static_cast<double>(smaller) / 2.0;
    out.n_effective = n;

    if (n <= kWilcoxonExactLimit) {
        // Count sign assignments by their doubled W+; each of the 2^n is equally likely.
        const std::uint64_t total = plus + minus;
        std::vector<std::uint64_t> ways(total + 1, 0);
        ways[0] = 1;
        std::uint64_t reach = 0;
        for (std::uint32_t r : doubled_rank) {
            reach += r;
            for (std::uint64_t s = reach; s >= r; --s) ways[s] += ways[s - r];
        }
        std::uint64_t at_most = 0;
        for (std::uint64_t s = 0; s <= smaller; ++s) at_most += ways[s];
        out.p_value = std::min(1.0, std::ldexp(2.0 * static_cast<double>(at_most), -static_cast<int>(n)));
        out.method = PValueMethod::exact;
        return out;
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    for (std::size_t t : tie_sizes) {
        const double tt = static_cast<double>(t);
        variance -= (tt * tt * tt - tt) / 48.0;
    }
    double diff = out.statistic - mean;
    if (diff != 0.0) diff -= 0.5 * (diff > 0.0 ? 1.0 : -1.0);
    const double z = diff / std::sqrt(variance);
    out.p_value = std::min(1.0, 2.0 * normal_survival(std::fabs(z)));
    out.method = PValueMethod::approximate;
    return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("Kolmogorov-Smirnov test needs two non-empty samples");
    require_finite(a, "sample a");
    require_finite(b, "sample b");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const auto n = static_cast<std::int64_t>(x.size());
    const auto m = static_cast<std::int64_t>(y.size());

    // Work with counts scaled by n*m so the supremum is found exactly.
    std::int64_t best = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() || j < y.size()) {
        double v = 0.0;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
            v = x[i];
        } else {
            v = y[j];
        }
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        const std::int64_t gap = static_cast<std::int64_t>(i) * m - static_cast<std::int64_t>(j) * n;
        best = std::max(best, gap < 0 ? -gap : gap);
    }
    return static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
}

TestOutcome ks_two_sample(std::span<const double> a, std::span<const double> b) {
    TestOutcome out;
    out.statistic = ks_statistic(a, b);
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double effective = n * m / (n + m);
    out.p_value = kolmogorov_survival(std::sqrt(effective) * out.statistic);
    out.n_effective = a.size() + b.size();
    out.method = PValueMethod::approximate;
    return out;
}

}  // namespace gitscale
