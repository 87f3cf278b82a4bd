#include "rangelab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rangelab/error.hpp"

namespace rangelab {

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) throw PreconditionError("wilson_interval: no trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double zero_count_upper_bound(std::uint64_t n, double alpha) {
  if (n == 0) throw PreconditionError("zero_count_upper_bound: no trials");
  return -std::expm1(std::log(alpha) / static_cast<double>(n));
}

Moments moments(std::span<const double> x) {
  if (x.size() < 2) throw PreconditionError("moments: need at least two values");
  Moments m;
  m.count = x.size();
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m.variance = m2 / (n - 1.0);
  m.sd = std::sqrt(m.variance);
  m.standard_error = m.sd / std::sqrt(n);
  const double pop2 = m2 / n, pop3 = m3 / n;
  m.skewness = pop2 > 0.0 ? pop3 / std::pow(pop2, 1.5) : 0.0;
  return m;
}

double log_mean_exp(std::span<const double> x) {
  if (x.empty()) throw PreconditionError("log_mean_exp: empty sample");
  const double top = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - top);
  return top + std::log(sum / static_cast<double>(x.size()));
}

Interval bootstrap_log_mean_exp(std::span<const double> x, int resamples, double level, SeedId seed,
                                std::uint32_t substream) {
  if (x.empty() || resamples < 2) throw PreconditionError("bootstrap: empty sample or too few resamples");
  CounterRng rng(seed, StreamPurpose::kBootstrap, substream);
  std::vector<double> draw(x.size());
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (auto& s : stats) {
    for (auto& d : draw) d = x[rng.below(x.size())];
    s = log_mean_exp(draw);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = 0.5 * (1.0 - level);
  const auto at = [&](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, stats.size() - 1);
    return stats[i] + (pos - static_cast<double>(i)) * (stats[j] - stats[i]);
  };
  return {at(tail), at(1.0 - tail)};
}

double kendall_tau(std::span<const double> y) {
  if (y.size() < 2) return 0.0;
  long long s = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) s += (y[j] > y[i]) - (y[j] < y[i]);
  const double pairs = 0.5 * static_cast<double>(y.size()) * static_cast<double>(y.size() - 1);
  return static_cast<double>(s) / pairs;
}

bool strictly_increasing(std::span<const double> y) {
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) return false;
  return y.size() >= 2;
}

}  // namespace rangelab
