#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace slogs {

/// In-place iterative radix-2 FFT for one power-of-two length.
///
/// forward computes X_k = sum_j x_j exp(-2 pi i jk/n); inverse includes the 1/n.
/// The plan is immutable after construction and may be shared across threads.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void run(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

bool is_power_of_two(std::size_t n);

}  // namespace slogs
