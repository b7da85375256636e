#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "slogs/grid.hpp"

namespace slogs {

using Complex = std::complex<double>;

/// Complex-valued state on a Grid: one value per node, row-major.
class ComplexField {
 public:
  explicit ComplexField(Grid grid);
  ComplexField(Grid grid, std::vector<Complex> values);

  /// Samples fn(x, y) at every node (y = 0 for d = 1).
  template <class Fn>
  static ComplexField from_function(const Grid& grid, Fn&& fn) {
    ComplexField f(grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto p = grid.point(j);
      f.values_[j] = Complex(fn(p[0], p[1]));
    }
    return f;
  }

  static ComplexField constant(const Grid& grid, Complex c);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  Complex& operator[](std::size_t j) { return values_[j]; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }

  /// False when any entry is NaN or infinite.
  bool all_finite() const;
  double max_abs() const;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex s);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(ComplexField a, Complex s) { return a *= s; }
  friend ComplexField operator*(Complex s, ComplexField a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

}  // namespace slogs
