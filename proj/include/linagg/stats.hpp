#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace linagg {

double mean(std::span<const double> v);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> v);
double median(std::span<const double> v);
/// Linear interpolation between order statistics (Hyndman-Fan type 7).
double quantile(std::span<const double> v, double p);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    /// Fewer than three points or zero spread in x (or y).
    bool degenerate = false;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
/// Fit of log y against log x. Nonpositive y makes the fit degenerate.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// Standard error of a binomial frequency sqrt(p(1-p)/R).
double binomial_se(double p, std::size_t trials);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);
/// Counter-based seed for (master, grid point, replicate).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t grid_index, std::uint64_t replicate);

}  // namespace linagg
