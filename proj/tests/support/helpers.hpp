#pragma once

#include <cmath>
#include <numbers>

#include "slogs/field.hpp"
#include "slogs/rng.hpp"

namespace slogs::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Grid torus1(std::size_t n = 64, double L = kTwoPi) { return Grid(1, L, n, Boundary::PeriodicTorus); }

/// Band-limited random field: a few low modes with random complex amplitudes.
inline ComplexField smooth_random(const Grid& grid, CounterRng& rng, int modes = 5) {
  const double base = (grid.boundary() == Boundary::PeriodicTorus ? 2.0 : 1.0) * std::numbers::pi / grid.extent();
  ComplexField f(grid);
  for (int m = 0; m < modes; ++m) {
    const double kx = base * std::floor(rng.uniform(-4.0, 5.0));
    const double ky = grid.dim() == 2 ? base * std::floor(rng.uniform(-4.0, 5.0)) : 0.0;
    const Complex a(rng.normal(), rng.normal());
    const bool dir = grid.boundary() == Boundary::HomogeneousDirichlet;
    const double half = grid.extent() / 2.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto p = grid.point(j);
      if (dir) {
        const double sx = std::sin(std::abs(kx) * (p[0] + half));
        const double sy = grid.dim() == 2 ? std::sin(std::abs(ky) * (p[1] + half)) : 1.0;
        f[j] += a * sx * sy;
      } else {
        f[j] += a * std::polar(1.0, kx * p[0] + ky * p[1]);
      }
    }
  }
  return f;
}

inline double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace slogs::test
