#include "slogs/norms.hpp"

#include <cmath>

#include "slogs/errors.hpp"
#include "slogs/spectral.hpp"

namespace slogs {

double inner(const ComplexField& u, const ComplexField& v) {
  require_same_grid(u.grid(), v.grid(), "inner");
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += (u[j] * std::conj(v[j])).real();
  return u.grid().cell_volume() * sum;
}

double norm_l2(const ComplexField& u) {
  double sum = 0.0;
  for (const auto& z : u.values()) sum += std::norm(z);
  return std::sqrt(u.grid().cell_volume() * sum);
}

double norm_h1(const ComplexField& u) {
  const double l2 = norm_l2(u);
  return std::sqrt(l2 * l2 + gradient_norm_sq(u));
}

double norm_h2(const ComplexField& u) {
  const double l2 = norm_l2(u);
  return std::sqrt(l2 * l2 + gradient_norm_sq(u) + laplacian_norm_sq(u));
}

double norm_lp(const ComplexField& u, double p) {
  if (!(p >= 1.0)) throw ParameterError("norm_lp requires p >= 1");
  double sum = 0.0;
  for (const auto& z : u.values()) sum += std::pow(std::abs(z), p);
  return std::pow(u.grid().cell_volume() * sum, 1.0 / p);
}

double norm_l2_alpha(const ComplexField& u, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("weighted norm requires alpha in (0, 2]");
  const Grid& g = u.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    sum += std::pow(1.0 + g.radius_sq(j), alpha) * std::norm(u[j]);
  return std::sqrt(g.cell_volume() * sum);
}

}  // namespace slogs
