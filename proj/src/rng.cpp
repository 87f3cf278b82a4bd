#include "rangelab/rng.hpp"

namespace rangelab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  ctr = round(ctr, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    ctr = round(ctr, key);
  }
  return ctr;
}

CounterRng::CounterRng(SeedId seed, StreamPurpose purpose, std::uint32_t substream) noexcept
    : key_{static_cast<std::uint32_t>(seed.master), static_cast<std::uint32_t>(seed.master >> 32)},
      // ctr_[0] is the block index; the remaining words name the stream.
      ctr_{0u, static_cast<std::uint32_t>(seed.replica),
           static_cast<std::uint32_t>(seed.replica >> 32),
           (static_cast<std::uint32_t>(purpose) << 24) ^ substream} {}

void CounterRng::refill() noexcept {
  // Four consecutive blocks per refill; they are independent, so the rounds
  // interleave. The stream is the same as one block at a time.
  std::array<PhiloxCounter, kBlocks> c;
  for (int b = 0; b < kBlocks; ++b) {
    c[b] = ctr_;
    c[b][0] += static_cast<std::uint32_t>(b);
  }
  PhiloxKey k = key_;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    for (int b = 0; b < kBlocks; ++b) c[b] = round(c[b], k);
  }
  for (int b = 0; b < kBlocks; ++b)
    for (int w = 0; w < 4; ++w) buf_[4 * b + w] = c[b][w];
  ctr_[0] += kBlocks;
  pos_ = 0;
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace rangelab
