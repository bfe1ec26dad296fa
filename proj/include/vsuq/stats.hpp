#pragma once

#include <span>
#include <vector>

namespace vsuq::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> x);

/// Kendall's tau-b in O(n log n) (Knight's merge-sort algorithm).
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Kolmogorov-Smirnov statistic of a sample against U[0,1].
double ks_uniform_statistic(std::span<const double> x);

/// Asymptotic Kolmogorov distribution p-value for statistic d and sample size n.
double ks_pvalue(double d, std::size_t n);

}  // namespace vsuq::stats
