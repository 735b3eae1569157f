#include "lrr/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrr {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed),
      stream_(stream_id),
      base_(seed ^ mix64(stream_id + kGolden)),
      counter_(0),
      cached_gauss_(0.0),
      has_cached_(false) {}

std::uint64_t RngStream::next_u64() noexcept {
  return mix64(base_ + kGolden * (++counter_));
}

double RngStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gauss_;
  }
  const double u1 = 1.0 - next_unit(); // in (0, 1], keeps the log finite
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gauss_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

int RngStream::next_sign() noexcept {
  return (next_u64() >> 63) ? 1 : -1;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("RngStream::next_below: bound must be positive");
  }
  // Accept only draws above 2^64 mod bound so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

RngStream RngStream::fork(std::uint64_t k) const noexcept {
  return RngStream(seed_, mix64(mix64(stream_ ^ 0xA0761D6478BD642Full) + k));
}

} // namespace lrr
