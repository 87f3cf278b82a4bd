#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rangelab/distribution_io.hpp"
#include "rangelab/error.hpp"
#include "rangelab/rng.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(StepDistribution, SimpleWalkCovariance) {
  const auto d = StepDistribution::srw();
  EXPECT_DOUBLE_EQ(d.covariance()[0][0], 0.5);
  EXPECT_DOUBLE_EQ(d.covariance()[1][1], 0.5);
  EXPECT_DOUBLE_EQ(d.covariance()[0][1], 0.0);
  EXPECT_DOUBLE_EQ(d.det_covariance(), 0.25);
  EXPECT_NEAR(d.two_pi_sqrt_det(), kPi, 1e-15);
  EXPECT_FALSE(d.strongly_aperiodic());
  EXPECT_EQ(d.period(), 2);
}

TEST(StepDistribution, LazyWalkCovariance) {
  const auto d = StepDistribution::lazy_srw();
  EXPECT_DOUBLE_EQ(d.covariance()[0][0], 0.25);
  EXPECT_DOUBLE_EQ(d.det_covariance(), 1.0 / 16.0);
  EXPECT_NEAR(d.two_pi_sqrt_det(), kPi / 2.0, 1e-15);
  EXPECT_TRUE(d.strongly_aperiodic());
  EXPECT_EQ(d.period(), 1);
}

TEST(StepDistribution, KingWalkCovariance) {
  const auto d = StepDistribution::king();
  EXPECT_DOUBLE_EQ(d.covariance()[0][0], 0.75);
  EXPECT_DOUBLE_EQ(d.covariance()[0][1], 0.0);
  EXPECT_TRUE(d.strongly_aperiodic());
}

TEST(StepDistribution, BuiltinNames) {
  EXPECT_EQ(StepDistribution::builtin("lazy-srw").name(), "lazy-srw");
  EXPECT_THROW(StepDistribution::builtin("nope"), ConfigError);
}

TEST(StepDistribution, RejectsDriftAsymmetryAndBadMass) {
  // Drift.
  EXPECT_THROW(StepDistribution("drift", {{{1, 0}, make_rational(1, 2)}, {{0, 1}, make_rational(1, 2)}}),
               ConfigError);
  // Mass 3/4.
  EXPECT_THROW(StepDistribution("short", {{{1, 0}, make_rational(1, 4)},
                                          {{-1, 0}, make_rational(1, 4)},
                                          {{0, 1}, make_rational(1, 8)},
                                          {{0, -1}, make_rational(1, 8)}}),
               ConfigError);
  // Supported on a line: degenerate covariance.
  EXPECT_THROW(StepDistribution("line", {{{1, 0}, make_rational(1, 2)}, {{-1, 0}, make_rational(1, 2)}}),
               ConfigError);
  // Generates only the even sublattice {x + y even}.
  EXPECT_THROW(StepDistribution("diag", {{{1, 1}, make_rational(1, 4)},
                                         {{-1, -1}, make_rational(1, 4)},
                                         {{1, -1}, make_rational(1, 4)},
                                         {{-1, 1}, make_rational(1, 4)}}),
               ConfigError);
}

TEST(StepDistribution, InspectReportsProblemsWithoutThrowing) {
  const StepEntry entries[] = {{{2, 0}, make_rational(1, 2)}, {{-2, 0}, make_rational(1, 2)}};
  const ValidationReport r = StepDistribution::inspect(entries);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.problems.empty());
}

// Property: the characteristic function is real, even, bounded by 1 and equal
// to the cosine sum; 1 - phi is computed without cancellation near 0.
TEST(StepDistribution, CharacteristicFunctionProperties) {
  CounterRng rng({3, 0}, StreamPurpose::kAuxiliary);
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw(), StepDistribution::king()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double l1 = (2.0 * rng.uniform() - 1.0) * kPi, l2 = (2.0 * rng.uniform() - 1.0) * kPi;
      double direct = 0.0;
      for (const auto& e : d.entries()) direct += e.prob.value() * std::cos(l1 * e.step.x + l2 * e.step.y);
      EXPECT_NEAR(d.characteristic(l1, l2), direct, 1e-14);
      EXPECT_NEAR(d.characteristic(-l1, -l2), d.characteristic(l1, l2), 1e-15);
      EXPECT_LE(std::abs(d.characteristic(l1, l2)), 1.0 + 1e-15);
      EXPECT_NEAR(d.one_minus_characteristic(l1, l2), 1.0 - direct, 1e-14);
    }
    // Small-frequency expansion 1 - phi ~ (l . Gamma l) / 2.
    const double h = 1e-6;
    EXPECT_NEAR(d.one_minus_characteristic(h, 0.0) / (h * h), d.covariance()[0][0] / 2.0, 1e-6);
  }
}

TEST(StepDistribution, SamplerFrequenciesMatchLaw) {
  const auto d = StepDistribution::lazy_srw();
  CounterRng rng({99, 1}, StreamPurpose::kSteps);
  const int n = 160000;
  int stay = 0, right = 0;
  for (int i = 0; i < n; ++i) {
    const Point s = d.sample(rng);
    stay += (s == Point{0, 0});
    right += (s == Point{1, 0});
  }
  EXPECT_NEAR(stay / double(n), 0.5, 5.0 * std::sqrt(0.25 / n));
  EXPECT_NEAR(right / double(n), 0.125, 5.0 * std::sqrt(0.125 * 0.875 / n));
}

TEST(DistributionIo, RoundTripAndInlineForms) {
  const auto king = StepDistribution::king();
  const auto back = distribution_from_json(distribution_to_json(king));
  EXPECT_EQ(back.canonical(), king.canonical());
  EXPECT_EQ(back.hash(), king.hash());
  const nlohmann::json inline_srw = {
      {"name", "srw"}, {"steps", {{1, 0, 1, 4}, {-1, 0, 1, 4}, {0, 1, 1, 4}, {0, -1, 1, 4}}}};
  EXPECT_EQ(distribution_from_json(inline_srw).canonical(), StepDistribution::srw().canonical());
  EXPECT_THROW(distribution_from_json(nlohmann::json{{"steps", "bad"}}), ConfigError);
  EXPECT_THROW(distribution_from_json(nlohmann::json{{"file", "/nonexistent/x.json"}}), ConfigError);
}

}  // namespace
}  // namespace rangelab
