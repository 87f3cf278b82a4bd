#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "rangelab/error.hpp"
#include "rangelab/range_stats.hpp"
#include "rangelab/return_table.hpp"
#include "rangelab/rng.hpp"
#include "rangelab/visited_set.hpp"
#include "rangelab/walk.hpp"

namespace rangelab {
namespace {

// Generators: arbitrary point sequences in a small box (many repeats) and
// genuine walk paths of the built-in laws.
std::vector<Point> random_points(CounterRng& rng, std::size_t n, int box) {
  std::vector<Point> p(n);
  for (auto& q : p)
    q = {static_cast<int>(rng.below(2 * box + 1)) - box, static_cast<int>(rng.below(2 * box + 1)) - box};
  return p;
}

std::vector<Point> random_walk(CounterRng& rng, std::size_t n) {
  static const StepDistribution laws[] = {StepDistribution::srw(), StepDistribution::lazy_srw(),
                                          StepDistribution::king()};
  const auto& d = laws[rng.below(3)];
  return sample_path(d, n, {rng.next_u64(), rng.next_u64()}).positions;
}

std::set<std::pair<int, int>> naive_set(std::span<const Point> p) {
  std::set<std::pair<int, int>> s;
  for (Point q : p) s.insert({q.x, q.y});
  return s;
}

std::uint64_t naive_range(std::span<const Point> p) { return naive_set(p).size(); }

TEST(VisitedSet, MatchesStdMapCounts) {
  CounterRng rng({1, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = random_points(rng, 1 + rng.below(5000), 1 + static_cast<int>(rng.below(40)));
    VisitedSet set(4);
    std::map<std::pair<int, int>, std::uint32_t> ref;
    for (Point p : pts) {
      const auto before = ref[{p.x, p.y}]++;
      ASSERT_EQ(set.add(p), before);
    }
    EXPECT_EQ(set.size(), ref.size());
    std::uint64_t pairs = 0;
    for (const auto& [k, c] : ref) pairs += std::uint64_t{c} * (c - 1) / 2;
    EXPECT_EQ(set.pair_collisions(), pairs);
    const auto keys = set.sorted_keys();
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    for (const auto& [k, c] : ref) EXPECT_TRUE(set.contains({k.first, k.second}));
    EXPECT_FALSE(set.contains({1000, 1000}));
    set.clear();
    EXPECT_EQ(set.size(), 0u);
    EXPECT_FALSE(set.contains(pts.front()));
  }
}

TEST(VisitedSet, ExtremeCoordinates) {
  VisitedSet set;
  const Point a{INT32_MIN, INT32_MIN}, b{INT32_MAX, INT32_MIN}, c{-1, -1};
  EXPECT_TRUE(set.insert(a));
  EXPECT_TRUE(set.insert(b));
  EXPECT_TRUE(set.insert(c));
  EXPECT_FALSE(set.insert(a));
  EXPECT_EQ(set.size(), 3u);
}

TEST(Pack, OrderPreservingRoundTrip) {
  CounterRng rng({2, 0}, StreamPurpose::kAuxiliary);
  for (int i = 0; i < 1000; ++i) {
    const Point a{static_cast<std::int32_t>(rng()), static_cast<std::int32_t>(rng())};
    const Point b{static_cast<std::int32_t>(rng()), static_cast<std::int32_t>(rng())};
    EXPECT_EQ(unpack(pack(a)), a);
    EXPECT_EQ(pack(a) < pack(b), std::make_pair(a.x, a.y) < std::make_pair(b.x, b.y));
  }
}

TEST(RangeCount, MatchesNaiveCountAndPrefix) {
  CounterRng rng({3, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 40; ++trial) {
    const auto path = trial % 2 ? random_walk(rng, 1 + rng.below(3000)) : random_points(rng, 1 + rng.below(500), 6);
    const RangeStats s = range_count(path);
    EXPECT_EQ(s.range, naive_range(path));
    ASSERT_EQ(s.prefix.size(), path.size());
    for (std::size_t k = 0; k < path.size(); k += 1 + path.size() / 20)
      EXPECT_EQ(s.prefix[k], naive_range(std::span(path).first(k + 1)));
  }
  EXPECT_THROW(range_count(std::vector<Point>{}), PreconditionError);
}

TEST(RangeCount, CenteringUsesExactMean) {
  const auto table = build_return_table(StepDistribution::srw(), 64);
  const auto path = sample_path(StepDistribution::srw(), 64, {5, 5}).positions;
  const RangeStats s = range_count(path, table);
  ASSERT_TRUE(s.centered.has_value());
  EXPECT_DOUBLE_EQ(*s.centered, static_cast<double>(s.range) - table.ER[64]);
}

TEST(SelfIntersections, MatchesQuadraticCount) {
  CounterRng rng({4, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 30; ++trial) {
    const auto path = random_points(rng, 1 + rng.below(400), 1 + static_cast<int>(rng.below(8)));
    std::uint64_t naive = 0;
    for (std::size_t i = 0; i < path.size(); ++i)
      for (std::size_t j = i + 1; j < path.size(); ++j) naive += path[i] == path[j];
    EXPECT_EQ(self_intersection_count(path), naive);
  }
}

TEST(SortedSets, IntersectionAndUnion) {
  CounterRng rng({5, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_points(rng, rng.below(300), 10);
    const auto b = random_points(rng, rng.below(300), 10);
    const Point off{static_cast<int>(rng.below(5)) - 2, static_cast<int>(rng.below(5)) - 2};
    const auto ka = sorted_range(a), kb = sorted_range(b, off);
    auto sa = naive_set(a);
    std::set<std::pair<int, int>> sb;
    for (Point p : b) sb.insert({p.x + off.x, p.y + off.y});
    std::size_t common = 0;
    for (const auto& q : sa) common += sb.count(q);
    EXPECT_EQ(ka.size(), sa.size());
    EXPECT_EQ(intersection_size(ka, kb), common);
    EXPECT_EQ(set_union(ka, kb).size(), sa.size() + sb.size() - common);
  }
}

TEST(PFoldIntersection, MatchesBruteForce) {
  CounterRng rng({6, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 2 + rng.below(3), n = 1 + rng.below(200);
    std::vector<std::vector<Point>> paths;
    std::vector<Point> starts;
    for (std::size_t i = 0; i < p; ++i) {
      paths.push_back(random_points(rng, n, 5));
      starts.push_back({static_cast<int>(rng.below(3)) - 1, static_cast<int>(rng.below(3)) - 1});
    }
    std::set<std::pair<int, int>> common;
    for (Point q : paths[0]) common.insert({q.x + starts[0].x, q.y + starts[0].y});
    for (std::size_t i = 1; i < p; ++i) {
      std::set<std::pair<int, int>> next;
      for (Point q : paths[i])
        if (common.count({q.x + starts[i].x, q.y + starts[i].y})) next.insert({q.x + starts[i].x, q.y + starts[i].y});
      common = next;
    }
    EXPECT_EQ(p_fold_intersection(paths, starts).count, common.size());
  }
}

// Property: both decompositions reproduce the range exactly for every path
// length and every admissible level count.
TEST(Decomposition, HoldsOnRandomPaths) {
  CounterRng rng({7, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n;
    int levels = -1;
    if (trial % 2) {
      const int m = 1 + static_cast<int>(rng.below(11));
      n = std::size_t{1} << m;
      levels = static_cast<int>(rng.below(m + 1));
    } else {
      n = 2 + rng.below(3000);
    }
    const auto path = trial % 3 ? random_walk(rng, n) : random_points(rng, n, 4);
    const DecompositionRecord r = decomposition_check(path, levels);
    ASSERT_EQ(r.range, naive_range(path));
    ASSERT_TRUE(r.holds()) << "n=" << n << " levels=" << levels;
    if (r.dyadic) {
      EXPECT_EQ(r.beta.size(), std::size_t{1} << r.levels);
    }
  }
}

TEST(Decomposition, DefaultLevels) {
  EXPECT_EQ(default_dyadic_levels(10), 6);
  EXPECT_EQ(default_dyadic_levels(1), 1);
  EXPECT_EQ(default_dyadic_levels(2), 2);
  EXPECT_LE(default_dyadic_levels(4), 4);
}

TEST(Decomposition, BinaryDigitsOfLength) {
  const auto path = sample_path(StepDistribution::srw(), 13, {1, 1}).positions;
  const DecompositionRecord r = decomposition_check(path);
  EXPECT_FALSE(r.dyadic);
  EXPECT_EQ(r.binary_exponents, (std::vector<int>{3, 2, 0}));
  EXPECT_EQ(r.binary_blocks.size(), 3u);
  EXPECT_EQ(r.binary_cross.size(), 2u);
  EXPECT_TRUE(r.holds());
}

TEST(BlockStatistics, BoundsHoldOnRandomPaths) {
  CounterRng rng({8, 0}, StreamPurpose::kAuxiliary);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(2000);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 12));
    const auto path = random_walk(rng, n);
    const BlockStatistics b = block_statistics(path, k);
    EXPECT_EQ(b.range, naive_range(path));
    EXPECT_TRUE(b.union_bound_holds);
    EXPECT_TRUE(b.bonferroni_holds);
    std::size_t total = 0;
    for (auto l : b.lengths) total += l;
    EXPECT_EQ(total, n);
    EXPECT_LE(*std::max_element(b.lengths.begin(), b.lengths.end()) -
                  *std::min_element(b.lengths.begin(), b.lengths.end()),
              1u);
  }
  const auto path = random_walk(rng, 5);
  EXPECT_THROW(block_statistics(path, 0), PreconditionError);
  EXPECT_THROW(block_statistics(path, 6), PreconditionError);
}

}  // namespace
}  // namespace rangelab
