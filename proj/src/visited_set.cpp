#include "rangelab/visited_set.hpp"

#include <algorithm>
#include <bit>

namespace rangelab {

void VisitedSet::reserve(std::size_t expected) {
  const std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, 2 * expected + 2));
  if (cap <= keys_.size()) return;
  std::vector<std::uint64_t> old_keys = std::move(keys_);
  std::vector<std::uint32_t> old_counts = std::move(counts_);
  keys_.assign(cap, kEmpty);
  counts_.assign(cap, 0);
  mask_ = cap - 1;
  shift_ = 64 - std::countr_zero(cap);
  size_ = 0;
  for (std::size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] == kEmpty) continue;
    std::size_t j = slot(old_keys[i]);
    while (keys_[j] != kEmpty) j = (j + 1) & mask_;
    keys_[j] = old_keys[i];
    counts_[j] = old_counts[i];
    ++size_;
  }
}

void VisitedSet::grow() { reserve(keys_.size()); }

void VisitedSet::clear() {
  if (size_ == 0) return;
  std::fill(keys_.begin(), keys_.end(), kEmpty);
  size_ = 0;
}

std::uint64_t VisitedSet::pair_collisions() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (keys_[i] != kEmpty) total += static_cast<std::uint64_t>(counts_[i]) * (counts_[i] - 1) / 2;
  return total;
}

std::vector<std::uint64_t> VisitedSet::sorted_keys() const {
  std::vector<std::uint64_t> out;
  out.reserve(size_);
  for (auto k : keys_)
    if (k != kEmpty) out.push_back(k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rangelab
