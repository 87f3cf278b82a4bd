#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rangelab/lattice.hpp"
#include "rangelab/rng.hpp"

namespace rangelab {

/// Exact probability numerator/denominator, reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

struct StepEntry {
  Point step;
  Rational prob;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Result of checking the walk hypotheses. `ok()` is the conjunction of all
/// checks that make the distribution admissible.
struct ValidationReport {
  bool sums_to_one = false;
  bool nonnegative = false;
  bool symmetric = false;
  bool mean_zero = false;
  bool nondegenerate = false;
  bool full_lattice = false;
  bool strongly_aperiodic = false;
  int period = 0;  // gcd of possible return times: 1 or 2
  Matrix2 covariance{};
  double det_covariance = 0.0;
  std::vector<std::string> problems;

  bool ok() const {
    return sums_to_one && nonnegative && symmetric && mean_zero && nondegenerate && full_lattice;
  }
};

/// Symmetric, mean-zero, finite-support law on Z^2. Immutable after
/// construction; construction throws ConfigError unless the law is admissible.
class StepDistribution {
 public:
  StepDistribution(std::string name, std::vector<StepEntry> entries);

  static StepDistribution srw();
  static StepDistribution lazy_srw();
  static StepDistribution king();
  /// "srw", "lazy-srw", "king"; throws ConfigError on unknown names.
  static StepDistribution builtin(const std::string& name);

  /// Runs every check without throwing.
  static ValidationReport inspect(std::span<const StepEntry> entries);

  const std::string& name() const { return name_; }
  std::span<const StepEntry> entries() const { return entries_; }
  const ValidationReport& report() const { return report_; }
  const Matrix2& covariance() const { return report_.covariance; }
  double det_covariance() const { return report_.det_covariance; }
  /// 2 pi sqrt(det Gamma): the constant in H(n) ~ log n / (2 pi sqrt(det Gamma)).
  double two_pi_sqrt_det() const;
  bool strongly_aperiodic() const { return report_.strongly_aperiodic; }
  int period() const { return report_.period; }
  /// Largest |coordinate| over the support.
  int max_coordinate() const { return max_coord_; }

  /// Characteristic function phi(l) = sum p cos(l . x) (real by symmetry).
  double characteristic(double l1, double l2) const;
  /// 1 - phi(l), evaluated as sum 2 p sin^2(l.x / 2) to keep precision near 0.
  double one_minus_characteristic(double l1, double l2) const;

  /// Canonical text form used for hashing and caching.
  std::string canonical() const;
  std::uint64_t hash() const;

  /// O(1) sampling through an integer alias table; consumes one 64-bit draw.
  Point sample(CounterRng& rng) const noexcept {
    const std::uint64_t w = rng.next_u64();
    const auto column = static_cast<std::size_t>(((w >> 32) * alias_size_) >> 32);
    const auto coin = static_cast<std::uint32_t>(w);
    return coin < threshold_[column] ? points_[column] : points_[alias_[column]];
  }

 private:
  void build_alias();

  std::string name_;
  std::vector<StepEntry> entries_;
  ValidationReport report_;
  int max_coord_ = 0;
  std::vector<Point> points_;
  std::vector<double> probs_;
  std::vector<std::uint64_t> threshold_;  // in units of 2^-32; 2^32 means "always keep"
  std::vector<std::uint32_t> alias_;
  std::uint64_t alias_size_ = 0;
};

}  // namespace rangelab
