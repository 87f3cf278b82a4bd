#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangelab/execution.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Exact return/first-return/non-return sequences and the expected range.
///
/// u[k] = P(S_k = 0), H[k] = sum_{j<=k} u[j], r[j] = P(first return at j),
/// f[m] = P(S_j != 0 for 1 <= j <= m), ER[k] = E R_k = sum_{i=1..k} f[i-1].
/// All vectors are indexed from 0 and have size n + 1; r[0] and ER[0] are 0.
struct ReturnProbTable {
  std::string dist_name;
  std::uint64_t dist_hash = 0;
  double two_pi_sqrt_det = 0.0;
  std::size_t n = 0;
  std::vector<double> u, H, r, f, ER;

  /// H(n) - H(m) summed directly over u[m+1..n] (no cancellation).
  double h_difference(std::size_t n_hi, std::size_t m_lo) const;
  /// Largest |u_m - sum_j r_j u_{m-j}| over m in [1, upto].
  double renewal_residual(std::size_t upto) const;
};

/// f from u through sum_{j=0..m} f_j u_{m-j} = 1, one dot product per m.
/// The parallel kernel splits each dot product at block boundaries but keeps
/// the serial summation order, so its output is bit-identical.
std::vector<double> nonreturn_direct(std::span<const double> u, Execution exec);

/// f from u through the power series 1 / ((1 - s) U(s)) using Newton iteration
/// with FFT products. O(n log n); used for long tables.
std::vector<double> nonreturn_newton(std::span<const double> u);

struct TableOptions {
  Execution exec = Execution::kParallel;
  /// Tables longer than this use nonreturn_newton.
  std::size_t direct_limit = std::size_t{1} << 17;
};

ReturnProbTable build_return_table(const StepDistribution& dist, std::size_t n,
                                   const TableOptions& opts = {});

/// Assembles a table from a given u sequence (used by caching and tests).
ReturnProbTable table_from_returns(const StepDistribution& dist, std::vector<double> u,
                                   const TableOptions& opts = {});

/// CSV with header k,u,H,r,f,ER; every value printed with 17 significant digits.
void write_table_csv(const ReturnProbTable& t, const std::filesystem::path& file,
                     std::span<const double> enumerated_er = {});

/// Loads or builds the table; cache files are keyed by (distribution hash, n).
ReturnProbTable cached_return_table(const StepDistribution& dist, std::size_t n,
                                    const std::filesystem::path& cache_dir,
                                    const TableOptions& opts = {});

// Asymptotic comparisons.

struct RangeAsymptotics {
  double leading = 0.0;        // n / H(n)
  double second_order = 0.0;   // n / H(n) + n / (2 pi sqrt(det) H(n)^2)
  double h_asymptotic = 0.0;   // log n / (2 pi sqrt(det))
  double exact_er = 0.0;
  double ratio = 0.0;          // ER / (n / H(n))
  double scaled_residual = 0.0;  // (ER - n/H) H^2 / n
};

RangeAsymptotics expected_range_asymptotic(const ReturnProbTable& t, std::size_t n);

struct LocalCltReport {
  std::size_t n = 0;
  double scaled_return = 0.0;  // n P(S_n = 0)
  double limit = 0.0;          // 1 / (2 pi sqrt(det))
  double deviation = 0.0;      // |scaled_return / limit - 1|
};

/// Throws PreconditionError for walks that are not strongly aperiodic: their
/// return probabilities vanish at odd times and the n P(S_n=0) limit fails.
LocalCltReport local_clt_check(const StepDistribution& dist, const ReturnProbTable& t,
                               std::size_t n);

struct HDifference {
  double exact = 0.0;
  double asymptotic = 0.0;  // log(n/m) / (2 pi sqrt(det))
};

HDifference h_difference(const ReturnProbTable& t, std::size_t n, std::size_t m);

}  // namespace rangelab
