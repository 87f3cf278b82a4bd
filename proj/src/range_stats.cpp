#include "rangelab/range_stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rangelab/error.hpp"

namespace rangelab {

namespace {

// Sorted distinct keys of path[lo, hi).
std::vector<std::uint64_t> block_range(std::span<const Point> path, std::size_t lo, std::size_t hi) {
  return sorted_range(path.subspan(lo, hi - lo));
}

std::uint64_t hashed_range(std::span<const Point> path) {
  VisitedSet seen(path.size());
  for (Point p : path) seen.insert(p);
  return seen.size();
}

}  // namespace

RangeStats range_count(std::span<const Point> path) {
  if (path.empty()) throw PreconditionError("range_count: empty path");
  RangeStats out;
  out.n = path.size();
  out.prefix.resize(path.size());
  VisitedSet seen(std::min<std::size_t>(path.size(), std::size_t{1} << 20));
  std::uint32_t r = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    r += seen.insert(path[k]) ? 1 : 0;
    out.prefix[k] = r;
  }
  out.range = r;
  out.self_intersections = seen.pair_collisions();
  return out;
}

RangeStats range_count(std::span<const Point> path, const ReturnProbTable& table) {
  RangeStats out = range_count(path);
  if (table.n < out.n)
    throw PreconditionError("range_count: return table shorter than the path");
  out.centered = static_cast<double>(out.range) - table.ER[out.n];
  return out;
}

std::uint64_t self_intersection_count(std::span<const Point> path) {
  VisitedSet seen(path.size());
  for (Point p : path) seen.insert(p);
  return seen.pair_collisions();
}

std::vector<std::uint64_t> sorted_range(std::span<const Point> points, Point offset) {
  std::vector<std::uint64_t> keys;
  keys.reserve(points.size());
  for (Point p : points) keys.push_back(pack(p + offset));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

std::size_t intersection_size(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<std::uint64_t> set_union(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::vector<std::uint64_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IntersectionStats p_fold_intersection(std::span<const std::vector<Point>> paths,
                                      std::span<const Point> starts) {
  if (paths.size() < 2) throw PreconditionError("p_fold_intersection: need at least two walks");
  if (starts.size() != paths.size())
    throw PreconditionError("p_fold_intersection: one start offset per walk required");
  const std::size_t n = paths.front().size();
  for (const auto& p : paths)
    if (p.size() != n) throw PreconditionError("p_fold_intersection: walks differ in length");

  IntersectionStats out;
  out.p = paths.size();
  out.n = n;
  out.starts.assign(starts.begin(), starts.end());
  std::vector<std::uint64_t> common = sorted_range(paths[0], starts[0]);
  for (std::size_t i = 1; i < paths.size() && !common.empty(); ++i) {
    const auto next = sorted_range(paths[i], starts[i]);
    std::vector<std::uint64_t> kept;
    std::set_intersection(common.begin(), common.end(), next.begin(), next.end(),
                          std::back_inserter(kept));
    common = std::move(kept);
  }
  out.count = common.size();
  return out;
}

int default_dyadic_levels(int exponent) {
  if (exponent <= 1) return exponent;
  const int n = static_cast<int>(std::floor(2.0 * std::log2(static_cast<double>(exponent))));
  return std::clamp(n, 1, exponent);
}

DecompositionRecord decomposition_check(std::span<const Point> path, int levels) {
  const std::size_t n = path.size();
  if (n < 2) throw PreconditionError("decomposition_check: path length must be at least 2");
  DecompositionRecord rec;
  rec.n = n;
  rec.range = hashed_range(path);

  // Binary representation, most significant block first.
  std::vector<std::size_t> bounds{0};
  for (int bit = std::bit_width(n) - 1; bit >= 0; --bit) {
    if ((n >> bit) & 1u) {
      rec.binary_exponents.push_back(bit);
      bounds.push_back(bounds.back() + (std::size_t{1} << bit));
    }
  }
  const std::size_t l = rec.binary_exponents.size();
  std::vector<std::vector<std::uint64_t>> blocks(l);
  for (std::size_t i = 0; i < l; ++i) blocks[i] = block_range(path, bounds[i], bounds[i + 1]);
  // suffix[i] = S(n_i, n] as sorted keys.
  std::vector<std::uint64_t> suffix;
  rec.binary_cross.assign(l > 0 ? l - 1 : 0, 0);
  for (std::size_t i = l; i-- > 0;) {
    if (i + 1 < l) rec.binary_cross[i] = intersection_size(blocks[i], suffix);
    suffix = set_union(blocks[i], suffix);
  }
  rec.binary_blocks.resize(l);
  std::int64_t rhs = 0;
  for (std::size_t i = 0; i < l; ++i) {
    rec.binary_blocks[i] = blocks[i].size();
    rhs += static_cast<std::int64_t>(blocks[i].size());
  }
  for (auto a : rec.binary_cross) rhs -= static_cast<std::int64_t>(a);
  rec.binary_rhs = rhs;

  if (!std::has_single_bit(n)) return rec;

  // Dyadic tree: leaves of length 2^(m - N), merged pairwise up to the root.
  const int m = std::countr_zero(n);
  const int depth = levels < 0 ? default_dyadic_levels(m) : levels;
  if (depth > m) throw PreconditionError("decomposition_check: more levels than the exponent allows");
  rec.dyadic = true;
  rec.exponent = m;
  rec.levels = depth;
  const std::size_t leaves = std::size_t{1} << depth;
  const std::size_t width = n >> depth;
  std::vector<std::vector<std::uint64_t>> level(leaves);
  rhs = 0;
  rec.beta.resize(leaves);
  for (std::size_t k = 0; k < leaves; ++k) {
    level[k] = block_range(path, k * width, (k + 1) * width);
    rec.beta[k] = level[k].size();
    rhs += static_cast<std::int64_t>(level[k].size());
  }
  rec.alpha.resize(depth);
  for (int j = depth; j >= 1; --j) {
    const std::size_t pairs = std::size_t{1} << (j - 1);
    auto& alpha = rec.alpha[j - 1];
    alpha.resize(pairs);
    std::vector<std::vector<std::uint64_t>> parent(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
      alpha[k] = intersection_size(level[2 * k], level[2 * k + 1]);
      rhs -= static_cast<std::int64_t>(alpha[k]);
      parent[k] = set_union(level[2 * k], level[2 * k + 1]);
    }
    level = std::move(parent);
  }
  rec.dyadic_rhs = rhs;
  return rec;
}

BlockStatistics block_statistics(std::span<const Point> path, std::size_t blocks) {
  const std::size_t n = path.size();
  if (blocks == 0 || blocks > n)
    throw PreconditionError("block_statistics: block count must lie in [1, n]");
  BlockStatistics out;
  out.blocks = blocks;
  out.lengths.assign(blocks, n / blocks);
  for (std::size_t j = 0; j < n % blocks; ++j) ++out.lengths[j];

  std::vector<std::vector<std::uint64_t>> ranges(blocks);
  std::size_t lo = 0;
  VisitedSet block_hits(n);
  for (std::size_t j = 0; j < blocks; ++j) {
    ranges[j] = block_range(path, lo, lo + out.lengths[j]);
    lo += out.lengths[j];
    for (auto key : ranges[j]) block_hits.insert(unpack(key));
  }
  out.block_range.resize(blocks);
  std::uint64_t sum_e = 0;
  for (std::size_t j = 0; j < blocks; ++j) {
    out.block_range[j] = ranges[j].size();
    sum_e += ranges[j].size();
  }
  for (std::size_t j = 1; j < blocks; ++j)
    out.adjacent_overlap.push_back(intersection_size(ranges[j], ranges[j - 1]));
  out.range = block_hits.size();
  // A site hit by c blocks lies in C(c, 2) of the pairwise intersections.
  out.pairwise_overlap = block_hits.pair_collisions();
  out.union_bound_holds = out.range <= sum_e;
  out.bonferroni_holds = out.range + out.pairwise_overlap >= sum_e;
  return out;
}

}  // namespace rangelab
