#include "slogs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "slogs/csv.hpp"
#include "slogs/errors.hpp"
#include "slogs/norms.hpp"
#include "slogs/spectral.hpp"

namespace slogs {

ObservableSeries::ObservableSeries(std::vector<std::string> names) : names_(std::move(names)) {}

void ObservableSeries::add_row(double t, std::vector<double> row) {
  if (row.size() != names_.size()) throw ConfigError("observable row width mismatch");
  if (!times_.empty() && !(t > times_.back()))
    throw ConfigError("observable times must increase strictly");
  times_.push_back(t);
  rows_.push_back(std::move(row));
}

std::vector<double> ObservableSeries::column(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ConfigError("no observable named '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - names_.begin());
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[idx]);
  return out;
}

double ObservableSeries::column_max(const std::string& name) const {
  const auto col = column(name);
  if (col.empty()) throw ConfigError("empty observable series");
  return *std::max_element(col.begin(), col.end());
}

void ObservableSeries::write_csv(std::ostream& os) const {
  os << "time";
  for (const auto& n : names_) os << ',' << n;
  os << '\n';
  for (std::size_t i = 0; i < times_.size(); ++i) {
    os << format_double(times_[i]);
    for (double v : rows_[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

double mass(const ComplexField& u) {
  const double n = norm_l2(u);
  return n * n;
}

double kinetic(const ComplexField& u) { return 0.5 * gradient_norm_sq(u); }
double h1_norm(const ComplexField& u) { return norm_h1(u); }
double h2_norm(const ComplexField& u) { return norm_h2(u); }
double weighted_norm(const ComplexField& u, double alpha) { return norm_l2_alpha(u, alpha); }

std::vector<Observer> standard_observers(const EquationSpec& eq, double alpha) {
  auto sq = [](double x) { return x * x; };
  return {
      {"mass", [](const ComplexField& u) { return mass(u); }},
      {"kinetic", [](const ComplexField& u) { return kinetic(u); }},
      {"entropy", [eq](const ComplexField& u) { return entropy(u, eq.reg); }},
      {"energy", [eq](const ComplexField& u) { return modified_energy(u, eq); }},
      {"h1_sq", [sq](const ComplexField& u) { return sq(norm_h1(u)); }},
      {"h2_sq", [sq](const ComplexField& u) { return sq(norm_h2(u)); }},
      {"l2_alpha_sq", [sq, alpha](const ComplexField& u) { return sq(norm_l2_alpha(u, alpha)); }},
  };
}

namespace {

void check_interpolation_parameters(int dim, double alpha, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("interpolation needs eta in (0, 1)");
  if (!(alpha > dim * eta / (2.0 - 2.0 * eta)))
    throw ParameterError("interpolation needs alpha > d eta / (2 - 2 eta)");
}

}  // namespace

InterpolationCheck interpolation_check(const ComplexField& u, double alpha, double eta) {
  const int d = u.grid().dim();
  check_interpolation_parameters(d, alpha, eta);
  InterpolationCheck r;
  const double theta = d * eta / (2.0 * alpha * (1.0 - eta));
  r.lhs = norm_lp(u, 2.0 - 2.0 * eta);
  const double l2 = norm_l2(u);
  if (l2 == 0.0) return r;
  r.rhs_product = std::pow(l2, 1.0 - theta) * std::pow(norm_l2_alpha(u, alpha), theta);
  r.ratio = r.lhs / r.rhs_product;
  return r;
}

double interpolation_constant(int dim, double alpha, double eta) {
  check_interpolation_parameters(dim, alpha, eta);
  const double ball = dim == 1 ? 2.0 : std::numbers::pi;
  const double sphere = dim * ball;
  const double beta = alpha * (2.0 - 2.0 * eta) / eta;
  const double total = std::pow(ball, eta) + std::pow(sphere / (beta - dim), eta);
  return std::pow(total, 1.0 / (2.0 - 2.0 * eta));
}

}  // namespace slogs
