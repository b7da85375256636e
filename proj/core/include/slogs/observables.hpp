#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "slogs/field.hpp"
#include "slogs/regularization.hpp"

namespace slogs {

/// Named scalar channels sampled along one trajectory.
class ObservableSeries {
 public:
  ObservableSeries() = default;
  explicit ObservableSeries(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t size() const { return times_.size(); }

  /// Times must increase strictly; the row width must match names().
  void add_row(double t, std::vector<double> row);

  /// Column by name; throws ConfigError when absent.
  std::vector<double> column(const std::string& name) const;
  /// Largest value of a column over the sampled times.
  double column_max(const std::string& name) const;

  /// Header "time,<names...>", one row per sample time.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

struct Observer {
  std::string name;
  std::function<double(const ComplexField&)> fn;
};

/// M(u) = ||u||^2.
double mass(const ComplexField& u);
/// K(u) = ||grad u||^2 / 2.
double kinetic(const ComplexField& u);
double h1_norm(const ComplexField& u);
double h2_norm(const ComplexField& u);
double weighted_norm(const ComplexField& u, double alpha);

/// mass, kinetic, entropy, energy, h1_sq, h2_sq, l2_alpha_sq.
std::vector<Observer> standard_observers(const EquationSpec& eq, double alpha = 1.0);

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs_product = 0.0;
  double ratio = 0.0;
};

/**
 * Weighted interpolation ||v||_{L^{2-2eta}} <= C ||v||^{1-theta} ||v||_{L2_alpha}^theta,
 * theta = d eta / (2 alpha (1 - eta)). Requires eta in (0, 1) and
 * alpha > d eta / (2 - 2 eta). ratio = lhs / rhs_product (0 for the zero field).
 */
InterpolationCheck interpolation_check(const ComplexField& u, double alpha, double eta);

/**
 * Constant produced by splitting the L^{2-2eta} integral at the radius
 * r = (||v||_{L2_alpha} / ||v||)^{1/alpha}: Hoelder on the ball plus
 * Cauchy-Schwarz against |x|^{-alpha(2-2eta)} outside it, giving
 * C^{2-2eta} = (w_d)^eta + (d w_d / (beta - d))^eta, beta = alpha (2-2eta)/eta,
 * with w_d the unit-ball volume.
 */
double interpolation_constant(int dim, double alpha, double eta);

}  // namespace slogs
