#include "slogs/rng.hpp"

#include <cmath>
#include <numbers>

namespace slogs {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double uniform_from_words(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi >> 5) << 26) | (lo >> 6);
  return static_cast<double>(bits) * 0x1.0p-53;
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint32_t sample_index,
                           std::uint64_t step_index)
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      sample_(sample_index),
      step_(step_index) {}

void NormalStream::fill(std::span<double> out) const {
  const auto step_lo = static_cast<std::uint32_t>(step_);
  const auto step_hi = static_cast<std::uint32_t>(step_ >> 32);
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const auto block = static_cast<std::uint32_t>(i / 2);
    const auto r = philox4x32_10({block, step_lo, step_hi, sample_}, key_);
    // 1 - u lies in (0, 1], keeping the logarithm finite.
    const double u1 = 1.0 - uniform_from_words(r[0], r[1]);
    const double u2 = uniform_from_words(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = radius * std::cos(angle);
    if (i + 1 < out.size()) out[i + 1] = radius * std::sin(angle);
  }
}

CounterRng::CounterRng(std::uint64_t seed, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

void CounterRng::refill() {
  buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                           0xC0FFEEu, stream_},
                          key_);
  ++block_;
  used_ = 0;
}

double CounterRng::uniform() {
  if (used_ > 2) refill();
  const double u = uniform_from_words(buffer_[used_], buffer_[used_ + 1]);
  used_ += 2;
  return u;
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::log_uniform(double lo, double hi) {
  const double a = std::log(lo);
  return std::exp(a + uniform() * (std::log(hi) - a));
}

}  // namespace slogs
