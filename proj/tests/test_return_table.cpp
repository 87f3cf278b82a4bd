#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "rangelab/error.hpp"
#include "rangelab/return_probability.hpp"
#include "rangelab/return_table.hpp"

namespace rangelab {
namespace {

// Closed form for the simple walk: P(S_2m = 0) = (C(2m, m) / 4^m)^2.
double srw_return_closed_form(std::size_t k) {
  if (k % 2) return 0.0;
  const std::size_t m = k / 2;
  double c = 1.0;  // C(2m, m) / 4^m by the product (2j - 1) / (2j)
  for (std::size_t j = 1; j <= m; ++j) c *= (2.0 * j - 1.0) / (2.0 * j);
  return c * c;
}

TEST(ReturnProbability, SimpleWalkSmallValues) {
  const auto t = build_return_table(StepDistribution::srw(), 2);
  ASSERT_EQ(t.u.size(), 3u);
  EXPECT_NEAR(t.u[0], 1.0, 1e-15);
  EXPECT_NEAR(t.u[1], 0.0, 1e-15);
  EXPECT_NEAR(t.u[2], 0.25, 1e-15);
  EXPECT_NEAR(t.H[2], 1.25, 1e-15);
  EXPECT_NEAR(t.f[0], 1.0, 1e-15);
  EXPECT_NEAR(t.f[1], 1.0, 1e-15);
  EXPECT_NEAR(t.f[2], 0.75, 1e-15);
  EXPECT_NEAR(t.ER[1], 1.0, 1e-15);
  EXPECT_NEAR(t.ER[2], 2.0, 1e-15);
}

TEST(ReturnProbability, LazyWalkFirstStep) {
  EXPECT_NEAR(return_prob_exact(StepDistribution::lazy_srw(), 1), 0.5, 1e-15);
  // Two steps: stay twice, or a step and its reverse.
  EXPECT_NEAR(return_prob_exact(StepDistribution::lazy_srw(), 2), 0.25 + 4.0 / 64.0, 1e-15);
}

TEST(ReturnProbability, SimpleWalkMatchesClosedForm) {
  const auto u = return_probs(StepDistribution::srw(), 3000);
  for (std::size_t k = 0; k <= 3000; k += 7) EXPECT_NEAR(u[k], srw_return_closed_form(k), 1e-14) << "k=" << k;
  for (std::size_t k = 2990; k <= 3000; ++k) EXPECT_NEAR(u[k], srw_return_closed_form(k), 1e-14) << "k=" << k;
}

TEST(ReturnProbability, QuadratureAgreesWithConvolution) {
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw(), StepDistribution::king()}) {
    const auto dp = return_probs_dp(d, 200);
    const auto q = return_probs(d, 200);
    for (std::size_t k = 0; k <= 200; ++k) {
      EXPECT_NEAR(q[k], dp[k], 1e-10) << d.name() << " k=" << k;
      EXPECT_NEAR(return_prob_exact(d, k), dp[k], 1e-10) << d.name() << " k=" << k;
    }
  }
}

TEST(ReturnProbability, ExactGridRespectsNodeBudget) {
  EXPECT_THROW(return_prob_exact(StepDistribution::king(), 100000, 1000), ResourceError);
}

TEST(ReturnProbability, SerialAndParallelAreBitIdentical) {
  for (const auto& d : {StepDistribution::srw(), StepDistribution::king()}) {
    const auto a = return_probs(d, 5000, Execution::kSerial);
    const auto b = return_probs(d, 5000, Execution::kParallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) ASSERT_EQ(a[k], b[k]) << d.name() << " k=" << k;
  }
}

TEST(ReturnTable, NonReturnSolversAgree) {
  const auto u = return_probs(StepDistribution::lazy_srw(), 4096);
  const auto direct_s = nonreturn_direct(u, Execution::kSerial);
  const auto direct_p = nonreturn_direct(u, Execution::kParallel);
  const auto newton = nonreturn_newton(u);
  ASSERT_EQ(direct_s.size(), newton.size());
  for (std::size_t k = 0; k < direct_s.size(); ++k) {
    ASSERT_EQ(direct_s[k], direct_p[k]);
    EXPECT_NEAR(direct_s[k], newton[k], 1e-12) << "k=" << k;
  }
}

// Properties of the renewal relations on all built-in walks.
TEST(ReturnTable, RenewalProperties) {
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw(), StepDistribution::king()}) {
    const auto t = build_return_table(d, 2048);
    EXPECT_LT(t.renewal_residual(2048), 1e-13) << d.name();
    for (std::size_t k = 1; k <= 2048; ++k) {
      ASSERT_LE(t.f[k], t.f[k - 1] + 1e-15);  // non-return probability decreases
      ASSERT_GE(t.f[k], 0.0);
      ASSERT_NEAR(t.H[k], t.H[k - 1] + t.u[k], 1e-12);
      ASSERT_NEAR(t.ER[k] - t.ER[k - 1], t.f[k - 1], 1e-12);
      ASSERT_LE(t.ER[k], static_cast<double>(k));
    }
    // f_m equals 1 minus the first-return mass up to m.
    double first = 0.0;
    for (std::size_t k = 1; k <= 2048; ++k) first += t.r[k];
    EXPECT_NEAR(t.f[2048], 1.0 - first, 1e-12);
    EXPECT_NEAR(t.h_difference(2048, 1024), t.H[2048] - t.H[1024], 1e-12);
  }
}

TEST(ReturnTable, CacheRoundTripIsExact) {
  const auto dir = std::filesystem::temp_directory_path() / "rangelab-cache-test";
  std::filesystem::remove_all(dir);
  const auto built = cached_return_table(StepDistribution::king(), 777, dir);
  const auto loaded = cached_return_table(StepDistribution::king(), 777, dir);
  EXPECT_EQ(built.u, loaded.u);
  EXPECT_EQ(built.ER, loaded.ER);
  std::filesystem::remove_all(dir);
}

TEST(ReturnTable, HarmonicGrowth) {
  // H(n) - H(m) ~ log(n/m) / (2 pi sqrt(det Gamma)).
  const auto t = build_return_table(StepDistribution::lazy_srw(), 1 << 14);
  const HDifference h = h_difference(t, 1 << 14, 1 << 10);
  EXPECT_NEAR(h.exact / h.asymptotic, 1.0, 1e-3);
}

TEST(LocalClt, LazyWalkConverges) {
  const auto d = StepDistribution::lazy_srw();
  const auto t = build_return_table(d, 4000);
  const LocalCltReport a = local_clt_check(d, t, 500);
  const LocalCltReport b = local_clt_check(d, t, 2000);
  const LocalCltReport c = local_clt_check(d, t, 4000);
  EXPECT_NEAR(b.limit, 2.0 / std::numbers::pi, 1e-15);
  EXPECT_LT(b.deviation, 0.02);
  EXPECT_LT(c.deviation, a.deviation);
}

TEST(LocalClt, RejectsPeriodicWalk) {
  const auto d = StepDistribution::srw();
  const auto t = build_return_table(d, 100);
  EXPECT_THROW(local_clt_check(d, t, 100), PreconditionError);
}

TEST(RangeAsymptotics, ExpectedRangeRatioApproachesOne) {
  const auto t = build_return_table(StepDistribution::srw(), 1 << 12);
  const auto lo = expected_range_asymptotic(t, 1 << 8);
  const auto hi = expected_range_asymptotic(t, 1 << 12);
  EXPECT_GT(hi.ratio, 1.0);
  EXPECT_LT(hi.ratio - 1.0, lo.ratio - 1.0);
  EXPECT_NEAR(hi.exact_er, t.ER[1 << 12], 0.0);
}

}  // namespace
}  // namespace rangelab
