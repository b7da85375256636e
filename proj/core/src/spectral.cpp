#include "slogs/spectral.hpp"

#include <cmath>
#include <numbers>

#include "slogs/errors.hpp"

namespace slogs {

SpectralCache::SpectralCache(int dim, double extent, std::size_t n, Boundary boundary)
    : dim_(dim),
      n_(n),
      m_(boundary == Boundary::PeriodicTorus ? n : 2 * n),
      working_size_(dim == 1 ? m_ : m_ * m_),
      boundary_(boundary),
      extension_factor_(boundary == Boundary::PeriodicTorus ? 1.0 : std::pow(2.0, dim)),
      fft_(m_),
      k_(m_),
      k_deriv_(m_),
      laplacian_(working_size_),
      dealias_(working_size_) {
  const double period = boundary == Boundary::PeriodicTorus ? extent : 2.0 * extent;
  const auto m = static_cast<std::ptrdiff_t>(m_);
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const std::ptrdiff_t signed_index = i < m / 2 ? i : i - m;
    k_[i] = 2.0 * std::numbers::pi * static_cast<double>(signed_index) / period;
    k_deriv_[i] = (i == m / 2) ? 0.0 : k_[i];
  }
  const double keep = static_cast<double>(m_) / 3.0;
  for (std::size_t flat = 0; flat < working_size_; ++flat) {
    double k2 = 0.0;
    bool kept = true;
    for (int axis = 0; axis < dim_; ++axis) {
      const std::size_t i = axis_index(flat, axis);
      k2 += k_[i] * k_[i];
      const double signed_index = i < m_ / 2 ? static_cast<double>(i)
                                             : static_cast<double>(i) - static_cast<double>(m_);
      if (std::abs(signed_index) > keep) kept = false;
    }
    laplacian_[flat] = -k2;
    dealias_[flat] = kept;
  }
}

std::size_t SpectralCache::axis_index(std::size_t flat, int axis) const {
  if (dim_ == 1) return flat;
  return axis == 0 ? flat / m_ : flat % m_;
}

double SpectralCache::parseval_scale(double cell_volume) const {
  return cell_volume / (extension_factor_ * static_cast<double>(working_size_));
}

void SpectralCache::transform(std::vector<Complex>& data, bool inverse) const {
  auto run = [&](std::span<Complex> line) {
    if (inverse)
      fft_.inverse(line);
    else
      fft_.forward(line);
  };
  if (dim_ == 1) {
    run(data);
    return;
  }
  for (std::size_t row = 0; row < m_; ++row) run(std::span<Complex>(data).subspan(row * m_, m_));
  std::vector<Complex> column(m_);
  for (std::size_t col = 0; col < m_; ++col) {
    for (std::size_t row = 0; row < m_; ++row) column[row] = data[row * m_ + col];
    run(column);
    for (std::size_t row = 0; row < m_; ++row) data[row * m_ + col] = column[row];
  }
}

std::vector<Complex> SpectralCache::to_spectral(const ComplexField& u) const {
  std::vector<Complex> work(working_size_);
  const auto vals = u.values();
  if (boundary_ == Boundary::PeriodicTorus) {
    std::copy(vals.begin(), vals.end(), work.begin());
  } else if (dim_ == 1) {
    for (std::size_t j = 0; j < n_; ++j) {
      work[j] = vals[j];
      work[m_ - 1 - j] = -vals[j];
    }
  } else {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        const Complex v = vals[a * n_ + b];
        work[a * m_ + b] = v;
        work[(m_ - 1 - a) * m_ + b] = -v;
        work[a * m_ + (m_ - 1 - b)] = -v;
        work[(m_ - 1 - a) * m_ + (m_ - 1 - b)] = v;
      }
    }
  }
  transform(work, false);
  return work;
}

void SpectralCache::from_spectral(std::vector<Complex>& coeffs, ComplexField& out) const {
  transform(coeffs, true);
  auto vals = out.values();
  if (boundary_ == Boundary::PeriodicTorus) {
    std::copy(coeffs.begin(), coeffs.end(), vals.begin());
  } else if (dim_ == 1) {
    std::copy(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n_), vals.begin());
  } else {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) vals[a * n_ + b] = coeffs[a * m_ + b];
  }
}

namespace {

template <class Multiplier>
ComplexField apply_multiplier(const ComplexField& u, Multiplier&& mult) {
  const auto& sc = u.grid().spectral();
  auto coeffs = sc.to_spectral(u);
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= mult(k);
  ComplexField out(u.grid());
  sc.from_spectral(coeffs, out);
  return out;
}

}  // namespace

ComplexField laplacian(const ComplexField& u) {
  const auto& lap = u.grid().spectral().laplacian_multiplier();
  return apply_multiplier(u, [&](std::size_t k) { return Complex(lap[k], 0.0); });
}

std::vector<ComplexField> gradient(const ComplexField& u) {
  const auto& sc = u.grid().spectral();
  const auto& kd = sc.derivative_wavenumbers();
  std::vector<ComplexField> out;
  out.reserve(static_cast<std::size_t>(sc.dim()));
  for (int axis = 0; axis < sc.dim(); ++axis)
    out.push_back(apply_multiplier(
        u, [&](std::size_t k) { return Complex(0.0, kd[sc.axis_index(k, axis)]); }));
  return out;
}

ComplexField semigroup_apply(const ComplexField& u, double t) {
  const auto& lap = u.grid().spectral().laplacian_multiplier();
  return apply_multiplier(u, [&](std::size_t k) { return std::polar(1.0, lap[k] * t); });
}

ComplexField dealias(const ComplexField& u) {
  const auto& mask = u.grid().spectral().dealias_mask();
  return apply_multiplier(u, [&](std::size_t k) { return mask[k] ? Complex(1.0) : Complex(0.0); });
}

SemigroupOperator::SemigroupOperator(const Grid& grid, double t) : grid_(grid), t_(t) {
  const auto& lap = grid.spectral().laplacian_multiplier();
  multiplier_.resize(lap.size());
  for (std::size_t k = 0; k < lap.size(); ++k) multiplier_[k] = std::polar(1.0, lap[k] * t);
}

void SemigroupOperator::apply_in_place(ComplexField& u) const {
  require_same_grid(grid_, u.grid(), "SemigroupOperator");
  if (t_ == 0.0) return;
  const auto& sc = grid_.spectral();
  auto coeffs = sc.to_spectral(u);
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= multiplier_[k];
  sc.from_spectral(coeffs, u);
}

ComplexField SemigroupOperator::operator()(const ComplexField& u) const {
  ComplexField out = u;
  apply_in_place(out);
  return out;
}

namespace {

template <class Weight>
double weighted_parseval(const ComplexField& u, Weight&& w) {
  const auto& sc = u.grid().spectral();
  const auto coeffs = sc.to_spectral(u);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) sum += w(k) * std::norm(coeffs[k]);
  return sum * sc.parseval_scale(u.grid().cell_volume());
}

}  // namespace

double gradient_norm_sq(const ComplexField& u) {
  const auto& sc = u.grid().spectral();
  const auto& kd = sc.derivative_wavenumbers();
  return weighted_parseval(u, [&](std::size_t k) {
    double s = 0.0;
    for (int axis = 0; axis < sc.dim(); ++axis) {
      const double ka = kd[sc.axis_index(k, axis)];
      s += ka * ka;
    }
    return s;
  });
}

double laplacian_norm_sq(const ComplexField& u) {
  const auto& lap = u.grid().spectral().laplacian_multiplier();
  return weighted_parseval(u, [&](std::size_t k) { return lap[k] * lap[k]; });
}

double spectral_norm_l2(const ComplexField& u) {
  return std::sqrt(weighted_parseval(u, [](std::size_t) { return 1.0; }));
}

}  // namespace slogs
