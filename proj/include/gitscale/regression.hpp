#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/windows.hpp"

namespace gitscale {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Ordinary least squares fit of y on x with a two-sided Wald t-test on the slope.
struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double p_value = 1.0;
    double r_value = 0.0;
    std::size_t n_points = 0;
};

/// Needs at least three points and two distinct x values, otherwise throws
/// InsufficientData. A slope of exactly zero has p = 1; any other fit with zero
/// residual has stderr 0 and p = 0.
[[nodiscard]] RegressionResult ols_fit(std::span<const Point> points);

inline constexpr std::size_t kMinRegressionPoints = 3;
inline constexpr double kDefaultPThreshold = 0.01;

enum class Method { sornette, scholtes };
enum class Model { loglog, loglin };
enum class Classification { sublinear, superlinear, undetermined };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] std::string_view to_string(Model m);
[[nodiscard]] std::string_view to_string(Classification c);
[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] Model parse_model(std::string_view name);
[[nodiscard]] Classification parse_classification(std::string_view name);

/// Regression of one 250-day period; `fit` is empty when the period had too few
/// usable windows.
struct PeriodBeta {
    std::size_t period_index = 0;
    std::size_t n_windows = 0;
    std::optional<RegressionResult> fit;
};

/// Project-level verdict for one method and variant.
struct ProjectScaling {
    std::string project;
    Method method = Method::sornette;
    std::string variant;
    std::optional<double> coefficient;
    std::vector<PeriodBeta> period_betas;  // Sornette only
    Classification classification = Classification::undetermined;
    /// Periods averaged (Sornette) or samples regressed (Scholtes).
    std::size_t n_points = 0;
};

/// Mean slope over the fitted periods whose p-value is below `p_threshold`
/// (all fitted periods when no threshold is given). Empty when none qualifies.
[[nodiscard]] std::optional<double> average_beta(std::span<const PeriodBeta> periods,
                                                 std::optional<double> p_threshold,
                                                 std::size_t* contributing = nullptr);

/// Fits ln(output) on ln(team size) per period and averages the slopes.
[[nodiscard]] ProjectScaling sornette_average_beta(std::span<const PeriodSamples> periods,
                                                   std::optional<double> p_threshold = kDefaultPThreshold);

/// Regresses ln(productivity) on ln(team size) (loglog) or on team size (loglin).
[[nodiscard]] ProjectScaling scholtes_alpha3(std::span<const WindowSample> samples, Model model);

/// Sornette: superlinear above 1. Scholtes: superlinear above 0. The boundary itself
/// is sublinear.
[[nodiscard]] Classification classify(std::optional<double> coefficient, Method method);

struct EffectiveTeamSize {
    double n_effective = 0.0;
    std::size_t member_count = 0;
    std::vector<double> shares;
};

/// n = 2^H with H the base-2 entropy of the members' work shares.
[[nodiscard]] EffectiveTeamSize effective_team_size(std::span<const double> work);

}  // namespace gitscale
