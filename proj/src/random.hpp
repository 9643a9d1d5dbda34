#pragma once

// Counter-based random streams built on the SplitMix64 finalizer
// (Steele, Lea & Flood 2014). A stream is identified by (seed, stream id);
// the n-th draw of a stream is a pure function of (seed, stream id, n), so
// records can be generated in any order or in parallel and still reproduce.

#include <cmath>
#include <cstdint>

namespace reviewbounds {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Stream {
 public:
  constexpr Stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : base_(derive_seed(seed, stream_id)) {}

  constexpr std::uint64_t next_u64() noexcept { return splitmix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., bound-1}; bound > 0. Rejection removes modulo bias.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  // Standard exponential, via inversion.
  double next_exponential() noexcept { return -std::log1p(-next_unit()); }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace reviewbounds
