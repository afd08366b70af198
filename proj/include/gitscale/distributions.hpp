#pragma once

namespace gitscale {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and x in [0, 1],
/// evaluated with a Lentz continued fraction (absolute error well below 1e-10).
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
[[nodiscard]] double student_t_two_sided_p(double t, double df);

/// Upper tail of the standard normal distribution, P(Z >= z).
[[nodiscard]] double normal_survival(double z);

/// Upper tail of the Kolmogorov distribution, P(K >= lambda).
[[nodiscard]] double kolmogorov_survival(double lambda);

}  // namespace gitscale
