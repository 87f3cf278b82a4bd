#pragma once

#include <cstdint>
#include <vector>

#include "rangelab/lattice.hpp"

namespace rangelab {

/// Open-addressing hash set of lattice points with optional visit counts.
/// Reusable across replicas: clear() keeps the allocation.
class VisitedSet {
 public:
  explicit VisitedSet(std::size_t expected = 16) { reserve(expected); }

  void reserve(std::size_t expected);
  void clear();

  /// Records a visit to p and returns the number of earlier visits.
  std::uint32_t add(Point p) {
    const std::uint64_t key = pack(p);
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == kEmpty) {
        keys_[i] = key;
        counts_[i] = 1;
        if (++size_ * 2 > keys_.size()) grow();
        return 0;
      }
      if (keys_[i] == key) return counts_[i]++;
      i = (i + 1) & mask_;
    }
  }

  /// Inserts p; returns true when p was not present.
  bool insert(Point p) { return add(p) == 0; }

  bool contains(Point p) const {
    const std::uint64_t key = pack(p);
    for (std::size_t i = slot(key);; i = (i + 1) & mask_) {
      if (keys_[i] == key) return true;
      if (keys_[i] == kEmpty) return false;
    }
  }

  std::size_t size() const { return size_; }

  /// Sum over sites of C(visits, 2).
  std::uint64_t pair_collisions() const;

  /// Distinct keys in increasing order.
  std::vector<std::uint64_t> sorted_keys() const;

 private:
  // pack() yields all ones only for (INT32_MAX, INT32_MAX), which the
  // coordinate overflow guard in sample_path excludes.
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  std::size_t slot(std::uint64_t key) const {
    return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
  }
  void grow();

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> counts_;
  std::size_t size_ = 0;
  std::size_t mask_ = 0;
  int shift_ = 64;
};

}  // namespace rangelab
