#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rangelab/execution.hpp"
#include "rangelab/kappa.hpp"
#include "rangelab/replicas.hpp"
#include "rangelab/return_table.hpp"
#include "rangelab/statistics.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Desk-scale check of the growth conditions on b_n. "o(.)" has no finite
/// meaning, so a schedule passes when the ratio log b_n / (log n)^{1/2}
/// (upper) or b_n / (log n)^{1/5} (lower) is nonincreasing along the ladder
/// and below 1 at its last point.
struct ScheduleFlags {
  std::vector<double> upper_ratio;
  std::vector<double> lower_ratio;
  bool upper_ok = false;
  bool lower_ok = false;
  std::vector<std::string> warnings;
};

/// Throws ConfigError unless ns is strictly increasing, b > 1 everywhere, and
/// b is strictly increasing when the ladder has more than one point.
ScheduleFlags check_schedule(std::span<const std::size_t> ns, std::span<const double> bs);

struct DeviationProbe {
  std::vector<std::size_t> ns;
  std::vector<double> bs;
  std::vector<double> thetas;   // upper-tail levels
  std::vector<double> lambdas;  // lower-tail levels
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  Execution exec = Execution::kParallel;
};

struct TailRow {
  std::size_t n = 0;
  double b = 0.0;
  std::string side;     // "upper" or "lower"
  std::string variant;  // "corollary", "exact-H" or "lower"
  double level = 0.0;   // theta or lambda
  double threshold = 0.0;
  std::uint64_t exceedances = 0;
  std::uint64_t replicas = 0;
  double frequency = 0.0;
  Interval ci;
  bool zero_count = false;  // ci.hi is then a one-sided 95% upper bound
  bool low_count = false;   // fewer than 30 exceedances
  double rate = 0.0;        // log(frequency) / b; -inf with zero count
  Interval rate_ci;         // log of the CI ends over b
  double rate_theta = 0.0;  // log(frequency) / b^theta (corollary variant)
};

struct TailReport {
  ScheduleFlags flags;
  std::vector<TailRow> rows;
};

/// Rows for one n from centred samples R_n - E R_n.
std::vector<TailRow> upper_tail_rows(const StepDistribution& dist, const ReturnProbTable& table,
                                     std::size_t n, double b, std::span<const double> thetas,
                                     std::span<const double> centered);
std::vector<TailRow> lower_tail_rows(std::size_t n, double b, std::span<const double> lambdas,
                                     std::span<const double> centered);

/// Simulates probe.replicas paths per ladder point (one path serves all
/// points) and tabulates both upper-threshold variants.
TailReport mc_upper_tail(const StepDistribution& dist, const ReturnProbTable& table,
                         const DeviationProbe& probe);
TailReport mc_lower_tail(const StepDistribution& dist, const ReturnProbTable& table,
                         const DeviationProbe& probe);

/// Centred range samples R_n - E R_n for every ladder point, replica-major.
std::vector<std::vector<double>> centered_samples(const StepDistribution& dist,
                                                  const ReturnProbTable& table,
                                                  std::span<const std::size_t> ns,
                                                  std::size_t replicas, std::uint64_t seed,
                                                  Execution exec);

struct AsymmetryReport {
  std::size_t n = 0;
  std::size_t replicas = 0;
  Moments moments;
  double a = 0.0;  // 2 empirical standard deviations
  std::uint64_t upper_count = 0;
  std::uint64_t lower_count = 0;
  Interval upper_ci, lower_ci;
  bool positive_skew = false;
  bool upper_heavier = false;
};

AsymmetryReport tail_asymmetry(std::size_t n, std::span<const double> centered);

enum class MomentMode { kAbsRange, kSignedRange, kIntersection };

MomentMode moment_mode_from_name(const std::string& name);
std::string moment_mode_name(MomentMode mode);

struct MomentPoint {
  std::size_t n = 0;
  std::size_t replicas = 0;
  double log_mean = 0.0;  // log of the empirical mean of exp(exponent)
  double mean = 0.0;      // exp(log_mean), may be +inf
  Interval log_ci;        // bootstrap
};

struct MomentCurve {
  MomentMode mode = MomentMode::kSignedRange;
  double theta = 0.0;
  std::size_t p = 2;
  std::vector<MomentPoint> points;
  double max_min_ratio = 0.0;
  bool monotone_growth = false;  // strictly increasing along the whole ladder
  double kendall_tau = 0.0;
};

/// Exponent for one replica: theta (log n)^2 / n * R-bar (signed),
/// theta (log n)^2 / n * |R-bar| (abs), or theta ((log n)^p / n * J)^{1/(p-1)}.
double moment_exponent(MomentMode mode, double theta, std::size_t n, double value, std::size_t p = 2);

MomentCurve moment_curve(MomentMode mode, double theta, std::size_t p, std::span<const std::size_t> ns,
                         const std::vector<std::vector<double>>& values, int resamples,
                         std::uint64_t seed);

struct MomentProbe {
  MomentMode mode = MomentMode::kSignedRange;
  double theta = 1.0;
  std::size_t p = 2;
  std::vector<std::size_t> ns;
  std::size_t replicas = 10000;
  int resamples = 1000;
  std::uint64_t seed = 1;
  Execution exec = Execution::kParallel;
};

/// `table` must reach max(ns) in the range modes; it is unused for intersections.
MomentCurve exp_moment_probe(const StepDistribution& dist, const ReturnProbTable& table,
                             const MomentProbe& probe);

/// n logloglog n / (log n)^2 and n loglog n / (log n)^2 in extended precision.
/// The first is undefined (returned as NaN) for n <= e^e.
double upper_lil_scale(std::size_t n);
double lower_lil_scale(std::size_t n);

struct LilReport {
  std::vector<std::size_t> ns;
  std::vector<std::size_t> skipped;  // ladder points with n <= e^e
  std::size_t trajectories = 0;
  /// Running maxima along the ladder, trajectory-major [t * ns.size() + i].
  std::vector<double> upper_running_max;
  std::vector<double> lower_running_max;
  double upper_reference = 0.0;                 // 2 pi sqrt(det Gamma)
  std::vector<double> lower_reference;          // Theta^{-1} per kappa candidate
  std::string note = "non-conclusive at desk scale: LIL limits are asymptotic in n";
};

LilReport lil_trajectory(const StepDistribution& dist, const ReturnProbTable& table,
                         std::span<const std::size_t> ns, std::size_t trajectories,
                         std::span<const double> lower_reference, std::uint64_t seed, Execution exec);

/// Frequency of max_{m <= n} R-bar_m > lambda n logloglog n / (log n)^2.
struct MaxExceedance {
  std::size_t n = 0;
  std::size_t replicas = 0;
  std::vector<double> lambdas;
  std::vector<std::uint64_t> counts;
  std::vector<Interval> ci;
  bool nonincreasing = false;
};

MaxExceedance running_max_exceedance(const StepDistribution& dist, const ReturnProbTable& table,
                                     std::size_t n, std::span<const double> lambdas,
                                     std::size_t replicas, std::uint64_t seed, Execution exec);

/// Normalizations of |phi(A+B) - phi(A) - phi(B)|, phi(j) = j / H(j), C = A + B.
/// kPrinted multiplies by C^{1/2} (log C)^2 / (A ^ B)^{1/2}. kScaled divides by
/// (C (A ^ B))^{1/2} / (log C)^2, the form whose order matches phi(j) ~ j / log j.
enum class CenteringNorm { kPrinted, kScaled };

std::string centering_norm_name(CenteringNorm norm);

struct CenteringSup {
  std::size_t points = 0;
  double value = 0.0;
  std::uint64_t arg_a = 0, arg_b = 0;
};

struct CenteringStudy {
  CenteringNorm norm = CenteringNorm::kScaled;
  CenteringSup coarse, refined;
  double relative_change = 0.0;
  bool finite = false;
  bool stable = false;  // relative change <= 5%
};

/// Log-spaced integers from 1 to top, duplicates removed. The (2k - 1)-point
/// grid contains the k-point grid.
std::vector<std::uint64_t> log_grid(std::size_t points, std::uint64_t top);

CenteringSup centering_sup(std::span<const double> H, std::span<const std::uint64_t> grid,
                           CenteringNorm norm);

/// Coarse grid of `points` per axis against its 2x refinement. H must reach 2 * top.
CenteringStudy centering_study(std::span<const double> H, std::size_t points, std::uint64_t top,
                               CenteringNorm norm);

}  // namespace rangelab
