#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>

namespace slogs {

enum class Boundary { PeriodicTorus, HomogeneousDirichlet };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

class SpectralCache;

/**
 * Uniform cell-centred grid on the box [-L/2, L/2)^d, d in {1, 2}.
 *
 * Nodes sit at x_j = -L/2 + (j + 1/2) h with h = L/N. For the Dirichlet
 * boundary these are the interior nodes of the sine basis; the walls lie
 * half a cell outside the first and last node.
 *
 * A Grid is an immutable value. Copies share one SpectralCache, so passing
 * grids (and the fields that hold them) around is cheap.
 */
class Grid {
 public:
  Grid(int dim, double extent, std::size_t points_per_axis, Boundary boundary);

  int dim() const { return dim_; }
  double extent() const { return extent_; }
  std::size_t points_per_axis() const { return n_; }
  Boundary boundary() const { return boundary_; }

  double spacing() const { return extent_ / static_cast<double>(n_); }
  double cell_volume() const;
  double volume() const;
  /// N^d.
  std::size_t size() const;

  /// 1-D node coordinate along any axis.
  double coordinate(std::size_t i) const;
  /// Coordinates of the flat (row-major, axis 0 slowest) index; unused axes are 0.
  std::array<double, 2> point(std::size_t flat) const;
  double radius_sq(std::size_t flat) const;

  const SpectralCache& spectral() const { return *spectral_; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.extent_ == b.extent_ && a.n_ == b.n_ &&
           a.boundary_ == b.boundary_;
  }

 private:
  int dim_;
  double extent_;
  std::size_t n_;
  Boundary boundary_;
  std::shared_ptr<const SpectralCache> spectral_;
};

/// Throws ConfigError when the two grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace slogs
