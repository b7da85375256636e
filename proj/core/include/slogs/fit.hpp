#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace slogs {

struct FitPoint {
  double x = 0.0;
  double y = 0.0;
  double yerr = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/**
 * Least squares for log y = intercept + slope log x.
 *
 * When every point carries yerr > 0 the fit is weighted by the inverse
 * variance of log y, (y / yerr)^2, and slope_stderr follows from those
 * variances; otherwise the fit is unweighted and slope_stderr is
 * residual-based. Needs >= 3 points, x strictly monotone, x, y > 0.
 */
SlopeFit fit_loglog_slope(std::span<const FitPoint> points);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Leave-one-out jackknife of an arbitrary statistic over n >= 2 samples.
Estimate jackknife(std::size_t n, const std::function<double(std::size_t excluded)>& leave_one_out,
                   double full_statistic);

/// Sample mean with its jackknife standard error (equal to sd / sqrt(n)).
Estimate jackknife_mean(std::span<const double> values);

}  // namespace slogs
