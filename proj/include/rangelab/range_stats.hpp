#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rangelab/lattice.hpp"
#include "rangelab/return_table.hpp"
#include "rangelab/visited_set.hpp"

namespace rangelab {

/// Range of S_1..S_n with its prefix sequence.
struct RangeStats {
  std::size_t n = 0;
  std::uint64_t range = 0;              // R_n
  std::vector<std::uint32_t> prefix;    // R_1..R_n
  std::optional<double> centered;       // R_n - E R_n
  std::optional<std::uint64_t> self_intersections;
};

/// Throws PreconditionError on an empty path.
RangeStats range_count(std::span<const Point> path);

/// Adds the exact centering R_n - E R_n from `table`.
RangeStats range_count(std::span<const Point> path, const ReturnProbTable& table);

/// sum_{1 <= i < j <= n} 1{S_i = S_j}.
std::uint64_t self_intersection_count(std::span<const Point> path);

/// Sorted distinct keys of {offset + p : p in points}.
std::vector<std::uint64_t> sorted_range(std::span<const Point> points, Point offset = {});

/// |a intersect b| for sorted distinct key arrays (merge).
std::size_t intersection_size(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

std::vector<std::uint64_t> set_union(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

struct IntersectionStats {
  std::size_t p = 0;
  std::size_t n = 0;
  std::uint64_t count = 0;   // J_n
  std::vector<Point> starts;
};

/// Number of sites in every range y_i + S^{(i)}[1, n]. Requires p >= 2 and
/// equal path lengths.
IntersectionStats p_fold_intersection(std::span<const std::vector<Point>> paths,
                                      std::span<const Point> starts);

/// Dyadic decomposition of #S[1, 2^m] into block ranges minus sibling overlaps,
/// and the binary-digit decomposition for arbitrary n.
struct DecompositionRecord {
  std::size_t n = 0;
  std::uint64_t range = 0;  // computed with the hash set, independently of the blocks

  // Dyadic case (n = 2^m): 2^levels blocks of length 2^(m - levels).
  bool dyadic = false;
  int exponent = 0;
  int levels = 0;
  std::vector<std::uint64_t> beta;                // beta_k, k = 1..2^levels
  std::vector<std::vector<std::uint64_t>> alpha;  // alpha[j-1][k-1], k = 1..2^(j-1)
  std::int64_t dyadic_rhs = 0;

  // Binary case: n = 2^{m_1} + ... + 2^{m_l}, m_1 > ... > m_l.
  std::vector<int> binary_exponents;
  std::vector<std::uint64_t> binary_blocks;  // B_i
  std::vector<std::uint64_t> binary_cross;   // A_i, i = 1..l-1
  std::int64_t binary_rhs = 0;

  bool dyadic_holds() const { return !dyadic || dyadic_rhs == static_cast<std::int64_t>(range); }
  bool binary_holds() const { return binary_rhs == static_cast<std::int64_t>(range); }
  bool holds() const { return dyadic_holds() && binary_holds(); }
};

/// Level count used when none is given: floor(2 log2 m), capped at m.
int default_dyadic_levels(int exponent);

/// Requires n >= 2. `levels` < 0 selects default_dyadic_levels.
DecompositionRecord decomposition_check(std::span<const Point> path, int levels = -1);

struct BlockStatistics {
  std::size_t blocks = 0;
  std::vector<std::size_t> lengths;
  std::vector<std::uint64_t> block_range;    // E_j
  std::vector<std::uint64_t> adjacent_overlap;  // H_j for j = 2..K (index j-2)
  std::uint64_t range = 0;
  std::uint64_t pairwise_overlap = 0;  // sum_{j<k} #(S(I_j) cap S(I_k))
  bool union_bound_holds = false;      // R_n <= sum E_j
  bool bonferroni_holds = false;       // R_n >= sum E_j - sum_{j<k} overlaps
};

/// Splits [1, n] into K consecutive blocks of length floor(n/K) or floor(n/K)+1
/// (the longer ones first). Throws PreconditionError when K is 0 or exceeds n.
BlockStatistics block_statistics(std::span<const Point> path, std::size_t blocks);

}  // namespace rangelab
