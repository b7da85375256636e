#include "slogs/field.hpp"

#include <cmath>

#include "slogs/errors.hpp"

namespace slogs {

ComplexField::ComplexField(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

ComplexField::ComplexField(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ConfigError("field length does not match the grid node count");
}

ComplexField ComplexField::constant(const Grid& grid, Complex c) {
  return ComplexField(grid, std::vector<Complex>(grid.size(), c));
}

bool ComplexField::all_finite() const {
  for (const auto& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex s) {
  for (auto& z : values_) z *= s;
  return *this;
}

}  // namespace slogs
