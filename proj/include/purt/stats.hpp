#pragma once

#include <span>

namespace purt::stats {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x) noexcept;

/// Standard normal quantile (probit). Throws std::domain_error outside (0,1).
[[nodiscard]] double normal_quantile(double p);

/// Chi-squared CDF with dof degrees of freedom.
[[nodiscard]] double chi_squared_cdf(double x, int dof);

/// Chi-squared quantile. Throws std::domain_error outside (0,1) or dof < 1.
[[nodiscard]] double chi_squared_quantile(double p, int dof);

[[nodiscard]] double mean(std::span<const double> x);

/// Sample variance, n-1 denominator.
[[nodiscard]] double variance(std::span<const double> x);

/// Linear-interpolation quantile of an ascending-sorted sample
/// (h = (n-1)p convention). p must lie in [0,1].
[[nodiscard]] double sorted_quantile(std::span<const double> sorted, double p);

/// Pearson correlation; throws DegenerateInputError if either side is constant.
[[nodiscard]] double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace purt::stats
