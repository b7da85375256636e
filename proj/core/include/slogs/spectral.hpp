#pragma once

#include <cstddef>
#include <vector>

#include "slogs/fft.hpp"
#include "slogs/field.hpp"

namespace slogs {

/**
 * Fourier realisation of the Laplacian and the free Schrodinger group.
 *
 * Periodic grids transform their N^d values directly. Dirichlet grids are
 * oddly extended across both walls to a 2N-periodic array of period 2L, so
 * every Fourier multiplier that is even in k acts as the corresponding sine
 * series multiplier with wavenumbers m*pi/L, m = 1..N.
 *
 * All arrays are indexed over the (possibly extended) working lattice of
 * M^d modes in FFT order.
 */
class SpectralCache {
 public:
  SpectralCache(int dim, double extent, std::size_t n, Boundary boundary);

  int dim() const { return dim_; }
  /// M: N for the torus, 2N for the odd extension.
  std::size_t working_points() const { return m_; }
  std::size_t working_size() const { return working_size_; }
  /// Number of copies of the physical domain inside the working array (1 or 2^d).
  double extension_factor() const { return extension_factor_; }

  /// Per-axis wavenumbers in FFT order; entry M/2 is the Nyquist mode.
  const std::vector<double>& wavenumbers() const { return k_; }
  /// First-derivative multiplier per axis (wavenumber with the Nyquist entry zeroed).
  const std::vector<double>& derivative_wavenumbers() const { return k_deriv_; }
  /// -|k|^2 over the working lattice.
  const std::vector<double>& laplacian_multiplier() const { return laplacian_; }
  /// Modes with |n_axis| <= M/3 on every axis.
  const std::vector<bool>& dealias_mask() const { return dealias_; }

  /// Axis index pair of a flat working-lattice index.
  std::size_t axis_index(std::size_t flat, int axis) const;

  /// Physical values -> spectral coefficients over the working lattice.
  std::vector<Complex> to_spectral(const ComplexField& u) const;
  /// Spectral coefficients -> physical values (restricted to the grid nodes).
  void from_spectral(std::vector<Complex>& coeffs, ComplexField& out) const;

  /// Weighted Parseval sum sum_k w_k |c_k|^2 scaled to the physical L2 inner product.
  double parseval_scale(double cell_volume) const;

 private:
  void transform(std::vector<Complex>& data, bool inverse) const;

  int dim_;
  std::size_t n_;
  std::size_t m_;
  std::size_t working_size_;
  Boundary boundary_;
  double extension_factor_;
  Fft fft_;
  std::vector<double> k_;
  std::vector<double> k_deriv_;
  std::vector<double> laplacian_;
  std::vector<bool> dealias_;
};

ComplexField laplacian(const ComplexField& u);
std::vector<ComplexField> gradient(const ComplexField& u);

/// S(t) = exp(i t Laplacian): multiplies mode k by exp(-i |k|^2 t). Any real t.
ComplexField semigroup_apply(const ComplexField& u, double t);

/// 2/3-rule projection.
ComplexField dealias(const ComplexField& u);

/// Precomputed S(t) for a fixed grid and step, used by the time steppers.
class SemigroupOperator {
 public:
  SemigroupOperator(const Grid& grid, double t);
  double time() const { return t_; }
  void apply_in_place(ComplexField& u) const;
  ComplexField operator()(const ComplexField& u) const;

 private:
  Grid grid_;
  double t_;
  std::vector<Complex> multiplier_;
};

/// sum_axes ||d_axis u||^2, evaluated in coefficient space (matches gradient()).
double gradient_norm_sq(const ComplexField& u);
/// ||Laplacian u||^2, evaluated in coefficient space.
double laplacian_norm_sq(const ComplexField& u);
/// ||u||_{L2} from the spectral coefficients (Parseval).
double spectral_norm_l2(const ComplexField& u);

}  // namespace slogs
