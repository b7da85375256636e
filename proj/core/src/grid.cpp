#include "slogs/grid.hpp"

#include <cmath>

#include "slogs/errors.hpp"
#include "slogs/fft.hpp"
#include "slogs/spectral.hpp"

namespace slogs {

std::string to_string(Boundary b) {
  return b == Boundary::PeriodicTorus ? "periodic" : "dirichlet";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic" || s == "torus") return Boundary::PeriodicTorus;
  if (s == "dirichlet") return Boundary::HomogeneousDirichlet;
  throw ConfigError("unknown boundary '" + s + "' (expected periodic|dirichlet)");
}

Grid::Grid(int dim, double extent, std::size_t points_per_axis, Boundary boundary)
    : dim_(dim), extent_(extent), n_(points_per_axis), boundary_(boundary) {
  if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ConfigError("grid extent must be positive");
  if (n_ < 8 || !is_power_of_two(n_))
    throw ConfigError("points per axis must be a power of two and at least 8");
  spectral_ = std::make_shared<const SpectralCache>(dim_, extent_, n_, boundary_);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }
double Grid::volume() const { return std::pow(extent_, dim_); }
std::size_t Grid::size() const { return dim_ == 1 ? n_ : n_ * n_; }

double Grid::coordinate(std::size_t i) const {
  return -0.5 * extent_ + (static_cast<double>(i) + 0.5) * spacing();
}

std::array<double, 2> Grid::point(std::size_t flat) const {
  if (dim_ == 1) return {coordinate(flat), 0.0};
  return {coordinate(flat / n_), coordinate(flat % n_)};
}

double Grid::radius_sq(std::size_t flat) const {
  const auto p = point(flat);
  return p[0] * p[0] + p[1] * p[1];
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) throw ConfigError(std::string(context) + ": fields live on different grids");
}

}  // namespace slogs
