#pragma once

#include <cstdint>

namespace lrr {

/// Counter-based pseudo random stream. A stream is fully determined by the
/// integer pair (seed, stream_id): the k-th output is a mix of the pair and
/// the counter k, so copies are cheap, sequences are reproducible across
/// runs, and disjoint stream ids give independent sequences without any
/// jump-ahead machinery. Gaussian variates come from Box-Muller applied to
/// 53-bit uniforms (pairs are generated together; the second one is cached).
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double next_unit() noexcept;

  /// Standard normal draw.
  double next_gaussian() noexcept;

  /// Fair sign, +1 or -1.
  int next_sign() noexcept;

  /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound);

  /// Child stream addressed by k. Depends only on (seed, stream_id, k), not
  /// on how far this stream has advanced, so experiments can hand trial t
  /// the stream fork(t) and stay reproducible under any thread schedule.
  RngStream fork(std::uint64_t k) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t base_;
  std::uint64_t counter_;
  double cached_gauss_;
  bool has_cached_;
};

} // namespace lrr
