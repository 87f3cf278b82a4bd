#pragma once

#include <cstdint>
#include <span>

#include "rangelab/rng.hpp"

namespace rangelab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% two-sided z value.
inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ95);

/// One-sided upper confidence bound for a proportion with zero successes:
/// the largest p with (1 - p)^n >= alpha.
double zero_count_upper_bound(std::uint64_t n, double alpha = 0.05);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double sd = 0.0;
  double standard_error = 0.0;
  double skewness = 0.0;  // m3 / m2^{3/2} with population central moments
};

/// Two-pass central moments. Requires at least two values.
Moments moments(std::span<const double> x);

/// log((1/N) sum exp(x_i)) without forming exp(x_i) for large x_i.
double log_mean_exp(std::span<const double> x);

/// Percentile bootstrap interval for log_mean_exp. Resampling indices come
/// from the bootstrap stream of `seed`, so the interval is reproducible.
Interval bootstrap_log_mean_exp(std::span<const double> x, int resamples, double level, SeedId seed,
                                std::uint32_t substream = 0);

/// Kendall rank correlation of the values against their index.
double kendall_tau(std::span<const double> y);

bool strictly_increasing(std::span<const double> y);

}  // namespace rangelab
