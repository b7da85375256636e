#include "slogs/fit.hpp"

#include <algorithm>
#include <cmath>

#include "slogs/errors.hpp"

namespace slogs {

SlopeFit fit_loglog_slope(std::span<const FitPoint> points) {
  const std::size_t n = points.size();
  if (n < 3) throw ParameterError("slope fit needs at least 3 points");
  const bool increasing = points[1].x > points[0].x;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = points[i];
    if (!(p.x > 0.0) || !(p.y > 0.0)) throw ParameterError("slope fit needs positive x and y");
    if (p.yerr < 0.0) throw ParameterError("slope fit needs yerr >= 0");
    if (i > 0 && ((points[i].x > points[i - 1].x) != increasing || points[i].x == points[i - 1].x))
      throw ParameterError("slope fit needs strictly monotone x");
  }
  const bool weighted = std::all_of(points.begin(), points.end(),
                                    [](const FitPoint& p) { return p.yerr > 0.0; });

  std::vector<double> lx(n), ly(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(points[i].x);
    ly[i] = std::log(points[i].y);
    if (weighted) {
      const double rel = points[i].yerr / points[i].y;
      w[i] = 1.0 / (rel * rel);
    }
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * lx[i];
    sy += w[i] * ly[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
    syy += w[i] * (ly[i] - my) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    rss += w[i] * r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  fit.slope_stderr = weighted ? std::sqrt(1.0 / sxx)
                              : std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

Estimate jackknife(std::size_t n, const std::function<double(std::size_t)>& leave_one_out,
                   double full_statistic) {
  if (n < 2) return {full_statistic, 0.0};
  std::vector<double> theta(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = leave_one_out(i);
    mean += theta[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : theta) ss += (t - mean) * (t - mean);
  return {full_statistic, std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss)};
}

Estimate jackknife_mean(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw ParameterError("mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  return jackknife(
      n, [&](std::size_t i) { return (sum - values[i]) / static_cast<double>(n - 1); }, mean);
}

}  // namespace slogs
