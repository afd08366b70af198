#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gitscale/errors.hpp"
#include "gitscale/stat_tests.hpp"
#include "oracles.hpp"

using namespace gitscale;

TEST_CASE("six positive differences give p = 2/64") {
    const std::vector<double> d{1, 2, 3, 4, 5, 6};
    const TestOutcome t = wilcoxon_signed_rank_differences(d);
    CHECK(t.p_value == 0.03125);
    CHECK(t.statistic == 0.0);
    CHECK(t.n_effective == 6);
    CHECK(t.method == PValueMethod::exact);
}

TEST_CASE("a single nonzero pair and perfectly symmetric pairs give p = 1") {
    const std::vector<std::pair<double, double>> one{{1, 1}, {2, 2}, {4, 3}};
    const TestOutcome a = wilcoxon_signed_rank(one);
    CHECK(a.p_value == 1.0);
    CHECK(a.statistic == 0.0);
    CHECK(a.n_effective == 1);
    const std::vector<double> sym{1, -1};
    const TestOutcome b = wilcoxon_signed_rank_differences(sym);
    CHECK(b.p_value == 1.0);
    CHECK(b.statistic == 1.5);
}

TEST_CASE("all-zero differences are degenerate") {
    const std::vector<std::pair<double, double>> same{{1, 1}, {2, 2}};
    CHECK_THROWS_AS((void)wilcoxon_signed_rank(same), DegeneratePairs);
    CHECK_THROWS_AS((void)wilcoxon_signed_rank(std::vector<std::pair<double, double>>{}), DegeneratePairs);
}

TEST_CASE("exact p equals enumeration of every sign assignment") {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> magnitude(-6, 6);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 30; ++rep) {
            std::vector<double> d(n);
            for (auto& v : d) v = magnitude(rng);  // small range: ties and zeros are common
            if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) d[0] = 1.0;
            CHECK(wilcoxon_signed_rank_differences(d).p_value == testing_support::oracle_wilcoxon_p(d));
        }
    }
}

TEST_CASE("large samples use the corrected normal approximation") {
    const std::vector<double> d{0,    1.0,   1.5,  -2.0, 2.5,  3.0,  -3.5, 4,     4.5,  -5.0,
                                5.5,  6.0,   -6.5, 7.0,  8,    -8.0, 8.5,  9.0,   -9.5, 10.0,
                                10.5, -11,   11.5, 12.0, -12.5, 13.0, 13.5, -14.0, 14,   15.0};
    const TestOutcome t = wilcoxon_signed_rank_differences(d);
    CHECK(t.method == PValueMethod::approximate);
    CHECK(t.n_effective == 29);
    CHECK(t.statistic == 135.0);
    CHECK(t.p_value == doctest::Approx(0.07619455593035222).epsilon(1e-12));
}

TEST_CASE("signed-rank outcome is unchanged by a common positive affine map") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<std::pair<double, double>> pairs;
    std::vector<std::pair<double, double>> mapped;
    for (int i = 0; i < 15; ++i) {
        const double a = n01(rng);
        const double b = n01(rng) + 0.3;
        pairs.emplace_back(a, b);
        mapped.emplace_back(4.0 * a + 2.0, 4.0 * b + 2.0);
    }
    const auto x = wilcoxon_signed_rank(pairs);
    const auto y = wilcoxon_signed_rank(mapped);
    CHECK(x.statistic == y.statistic);
    CHECK(x.p_value == y.p_value);
}

TEST_CASE("KS statistic equals the brute-force ECDF difference") {
    std::mt19937_64 rng(44);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    std::uniform_int_distribution<int> value(0, 30);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<double> a(size(rng));
        std::vector<double> b(size(rng));
        for (auto& v : a) v = value(rng) / 3.0;
        for (auto& v : b) v = value(rng) / 3.0;
        CHECK(ks_statistic(a, b) == testing_support::oracle_ks_d(a, b));
    }
}

TEST_CASE("KS edge cases") {
    const std::vector<double> a{1, 3, 5};
    const std::vector<double> b{2, 4, 6};
    CHECK(ks_statistic(a, b) == testing_support::oracle_ks_d(a, b));
    CHECK(ks_statistic(a, b) == 1.0 / 3.0);

    const TestOutcome same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    CHECK(ks_statistic(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 1.0);
    CHECK_THROWS_AS((void)ks_two_sample(std::vector<double>{}, a), InvalidArgument);
}

TEST_CASE("KS p-value uses the asymptotic Kolmogorov tail") {
    const std::vector<double> a{0.1, 0.4, 0.4, 1.3, 2.2, 2.9, 3.1};
    const std::vector<double> b{0.2, 0.4, 1.0, 1.1, 3.5};
    const TestOutcome t = ks_two_sample(a, b);
    CHECK(t.statistic == 13.0 / 35.0);
    CHECK(t.p_value == doctest::Approx(0.8158279374545474).epsilon(1e-12));
    CHECK(t.n_effective == 12);
    CHECK(t.method == PValueMethod::approximate);
}

TEST_CASE("KS is symmetric and invariant under monotone maps") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> a(23);
    std::vector<double> b(31);
    for (auto& v : a) v = n01(rng);
    for (auto& v : b) v = n01(rng) + 0.5;
    std::vector<double> ea;
    std::vector<double> eb;
    for (double v : a) ea.push_back(std::exp(v));
    for (double v : b) eb.push_back(std::exp(v));
    const auto x = ks_two_sample(a, b);
    const auto y = ks_two_sample(b, a);
    const auto z = ks_two_sample(ea, eb);
    CHECK(x.statistic == y.statistic);
    CHECK(x.p_value == y.p_value);
    CHECK(x.statistic == z.statistic);
    CHECK(x.statistic >= 0.0);
    CHECK(x.statistic <= 1.0);
}
