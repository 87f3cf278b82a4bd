#pragma once

#include <cstdint>
#include <functional>

namespace rangelab {

/// Point of the planar integer lattice.
struct Point {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(Point, Point) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  constexpr Point operator-() const { return {-x, -y}; }
};

/// Order-preserving 64-bit key: sorting keys sorts points lexicographically by (x, y).
constexpr std::uint64_t pack(Point p) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x) ^ 0x80000000u) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.y) ^ 0x80000000u);
}

constexpr Point unpack(std::uint64_t key) noexcept {
  return {static_cast<std::int32_t>(static_cast<std::uint32_t>(key >> 32) ^ 0x80000000u),
          static_cast<std::int32_t>(static_cast<std::uint32_t>(key) ^ 0x80000000u)};
}

struct PointHash {
  std::size_t operator()(Point p) const noexcept {
    return static_cast<std::size_t>(pack(p) * 0x9E3779B97F4A7C15ull);
  }
};

}  // namespace rangelab
