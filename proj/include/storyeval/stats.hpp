#pragma once

#include <optional>
#include <span>

namespace storyeval::stats {

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> xs);
double sample_sd(std::span<const double> xs);

/// Two-sided p value of a t statistic with `df` degrees of freedom.
double two_sided_p(double t, double df);

/// Pearson correlation; empty when either side has zero variance or the
/// inputs have fewer than two pairs.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace storyeval::stats
