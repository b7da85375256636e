#include "slogs/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "slogs/errors.hpp"

namespace slogs {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n), bitrev_(n), twiddle_(n / 2) {
  if (!is_power_of_two(n)) throw ParameterError("FFT length must be a power of two");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::forward(std::span<std::complex<double>> data) const { run(data, false); }

void Fft::inverse(std::span<std::complex<double>> data) const {
  run(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& z : data) z *= scale;
}

void Fft::run(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != n_) throw ParameterError("FFT buffer length does not match plan");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddle_[j * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> a = data[start + j];
        const std::complex<double> b = data[start + j + half] * w;
        data[start + j] = a + b;
        data[start + j + half] = a - b;
      }
    }
  }
}

}  // namespace slogs
