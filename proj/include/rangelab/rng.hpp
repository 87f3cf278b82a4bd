#pragma once

// Counter-based random numbers (Philox4x32-10). A stream is a pure function of
// (master seed, replica, purpose); draws never depend on thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rangelab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// Independent stream identifiers. Values are part of the on-disk determinism
/// contract; do not renumber.
enum class StreamPurpose : std::uint32_t {
  kSteps = 1,
  kClock = 2,
  kStart = 3,
  kBootstrap = 4,
  kTestFunction = 5,
  kAuxiliary = 6,
};

struct SeedId {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;
  friend bool operator==(const SeedId&, const SeedId&) = default;
};

/// Sequential view over the counter space of one (seed, purpose) pair.
/// Satisfies UniformRandomBitGenerator with 32-bit results.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(SeedId seed, StreamPurpose purpose, std::uint32_t substream = 0) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == kBuffered) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    return (hi << 32) | lo;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Rate-1 exponential.
  double exponential() noexcept { return -std::log1p(-uniform()); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  static constexpr int kBlocks = 4;
  static constexpr int kBuffered = 4 * kBlocks;

  void refill() noexcept;

  PhiloxKey key_;
  PhiloxCounter ctr_;
  std::array<std::uint32_t, kBuffered> buf_{};
  int pos_ = kBuffered;
};

}  // namespace rangelab
