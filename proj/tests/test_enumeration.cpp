#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "rangelab/enumeration.hpp"
#include "rangelab/error.hpp"
#include "rangelab/return_table.hpp"

namespace rangelab {
namespace {

// Independent brute force: every step sequence, weighted by its probability,
// with the range taken from a std::set.
struct Brute {
  std::vector<double> er, el;
};

Brute brute_force(const StepDistribution& d, std::size_t n) {
  Brute b{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  const auto steps = d.entries();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double w = 1.0;
    Point pos{};
    std::vector<Point> path;
    for (std::size_t i = 0; i < n; ++i) {
      w *= steps[idx[i]].prob.value();
      pos = pos + steps[idx[i]].step;
      path.push_back(pos);
    }
    std::set<std::pair<int, int>> seen;
    std::uint64_t pairs = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t j = 0; j + 1 < k; ++j) pairs += path[j] == path[k - 1];
      seen.insert({path[k - 1].x, path[k - 1].y});
      b.er[k] += w * static_cast<double>(seen.size());
      b.el[k] += w * static_cast<double>(pairs);
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == steps.size()) idx[i++] = 0;
    if (i == n) break;
  }
  return b;
}

TEST(Enumeration, SimpleWalkThreeSteps) {
  const auto e = enumerate_paths(StepDistribution::srw(), 3);
  EXPECT_EQ(e.paths, 64u);
  EXPECT_EQ(e.expected_range_exact[3], "11/4");
  EXPECT_DOUBLE_EQ(e.expected_range[3], 2.75);
  EXPECT_DOUBLE_EQ(e.return_probability[2], 0.25);
}

TEST(Enumeration, MatchesBruteForce) {
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw(), StepDistribution::king()}) {
    const std::size_t n = d.entries().size() > 5 ? 4 : 6;
    const auto e = enumerate_paths(d, n);
    const auto b = brute_force(d, n);
    for (std::size_t k = 1; k <= n; ++k) {
      EXPECT_NEAR(e.expected_range[k], b.er[k], 1e-12) << d.name() << " k=" << k;
      EXPECT_NEAR(e.expected_self_intersections[k], b.el[k], 1e-12) << d.name() << " k=" << k;
    }
  }
}

TEST(Enumeration, SimpleWalkSelfIntersections) {
  // Coincidences S_1 = S_3 and S_2 = S_4, each with probability 1/4.
  EXPECT_DOUBLE_EQ(enumerate_paths(StepDistribution::srw(), 4).expected_self_intersections[4], 0.5);
}

TEST(Enumeration, RenewalTableAgreesUpToNine) {
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw()}) {
    const auto e = enumerate_paths(d, 9);
    const auto t = build_return_table(d, 9);
    for (std::size_t k = 0; k <= 9; ++k) {
      EXPECT_NEAR(e.expected_range[k], t.ER[k], 1e-12) << d.name() << " k=" << k;
      EXPECT_NEAR(e.return_probability[k], t.u[k], 1e-12) << d.name() << " k=" << k;
    }
  }
}

TEST(Enumeration, KnownExactMeans) {
  EXPECT_EQ(enumerate_paths(StepDistribution::lazy_srw(), 3).expected_range_exact[3], "31/16");
  EXPECT_EQ(enumerate_paths(StepDistribution::king(), 3).expected_range_exact[3], "23/8");
}

TEST(Enumeration, PathBudget) {
  EXPECT_THROW(enumerate_paths(StepDistribution::king(), 12, 1000), ResourceError);
}

}  // namespace
}  // namespace rangelab
