#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace slogs {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the
/// output depends only on (counter, key), which is what makes Monte Carlo
/// streams reproducible regardless of scheduling.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Converts two 32-bit words to a double in [0, 1) with 53 random bits.
double uniform_from_words(std::uint32_t hi, std::uint32_t lo);

/**
 * Gaussian stream for one (seed, sample, step) triple.
 *
 * The key is the master seed; the counter is {block, step_lo, step_hi, sample}.
 * Each block yields two standard normals via Box-Muller, so the n-th normal
 * of a step is a pure function of (seed, sample, step, n).
 */
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint32_t sample_index, std::uint64_t step_index);

  /// Fills out with independent N(0, 1) draws, starting at normal index 0.
  void fill(std::span<double> out) const;

 private:
  PhiloxKey key_;
  std::uint32_t sample_;
  std::uint64_t step_;
};

/// Sequential Philox generator for property checks and random test data.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream);

  double uniform();
  double normal();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// log-uniform in [lo, hi), lo > 0.
  double log_uniform(double lo, double hi);

 private:
  void refill();

  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace slogs
