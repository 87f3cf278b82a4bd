#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rangelab/rng.hpp"
#include "rangelab/statistics.hpp"

namespace rangelab {
namespace {

TEST(Wilson, PublishedValues) {
  const Interval a = wilson_interval(5, 10);
  EXPECT_NEAR(a.lo, 0.2366, 1e-4);
  EXPECT_NEAR(a.hi, 0.7634, 1e-4);
  const Interval b = wilson_interval(0, 10);
  EXPECT_NEAR(b.lo, 0.0, 1e-15);
  EXPECT_NEAR(b.hi, 0.2775, 1e-4);
  const Interval c = wilson_interval(81, 263);
  EXPECT_NEAR(c.lo, 0.2553, 1e-4);
  EXPECT_NEAR(c.hi, 0.3662, 1e-4);
}

// Property: the interval contains the point estimate and lies in [0, 1].
TEST(Wilson, ContainsEstimate) {
  CounterRng rng({1, 0}, StreamPurpose::kAuxiliary);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t n = 1 + rng.below(100000), k = rng.below(n + 1);
    const Interval ci = wilson_interval(k, n);
    const double p = static_cast<double>(k) / static_cast<double>(n);
    ASSERT_LE(ci.lo, p + 1e-15);
    ASSERT_GE(ci.hi, p - 1e-15);
    ASSERT_GE(ci.lo, 0.0);
    ASSERT_LE(ci.hi, 1.0);
  }
}

TEST(ZeroCount, RuleOfThree) {
  EXPECT_NEAR(zero_count_upper_bound(100), 1.0 - std::pow(0.05, 0.01), 1e-15);
  EXPECT_NEAR(zero_count_upper_bound(100000) * 100000, 3.0, 0.01);
}

TEST(Moments, HandComputed) {
  const std::vector<double> x{1, 2, 3, 10};
  const Moments m = moments(x);
  EXPECT_EQ(m.count, 4u);
  EXPECT_DOUBLE_EQ(m.mean, 4.0);
  EXPECT_NEAR(m.variance, 50.0 / 3.0, 1e-13);
  EXPECT_NEAR(m.standard_error, std::sqrt(50.0 / 3.0 / 4.0), 1e-13);
  EXPECT_NEAR(m.skewness, 45.0 / std::pow(12.5, 1.5), 1e-13);
  const std::vector<double> mirrored{-1, -2, -3, -10};
  EXPECT_NEAR(moments(mirrored).skewness, -m.skewness, 1e-13);
}

TEST(LogMeanExp, StableForLargeArguments) {
  EXPECT_NEAR(log_mean_exp(std::vector<double>{1000, 1000}), 1000.0, 1e-12);
  EXPECT_NEAR(log_mean_exp(std::vector<double>{0, std::log(3.0)}), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_mean_exp(std::vector<double>{-2000, -2000 + std::log(3.0)}), -2000 + std::log(2.0), 1e-12);
}

TEST(Bootstrap, ReproducibleAndCoversEstimate) {
  CounterRng rng({2, 0}, StreamPurpose::kAuxiliary);
  std::vector<double> x(2000);
  for (auto& v : x) v = rng.uniform();
  const Interval a = bootstrap_log_mean_exp(x, 500, 0.95, {9, 0});
  const Interval b = bootstrap_log_mean_exp(x, 500, 0.95, {9, 0});
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  const double est = log_mean_exp(x);
  EXPECT_LT(a.lo, est);
  EXPECT_GT(a.hi, est);
}

TEST(Kendall, HandComputed) {
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{1, 2, 3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(std::vector<double>{4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(kendall_tau(std::vector<double>{1, 3, 2}), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(strictly_increasing(std::vector<double>{1, 2, 3}));
  EXPECT_FALSE(strictly_increasing(std::vector<double>{1, 2, 2}));
}

}  // namespace
}  // namespace rangelab
