#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Exact path-enumeration averages, the ground truth for the renewal table.
/// Each mean is held as an integer numerator over D^k, where D is the common
/// denominator of the step probabilities, so small-n values are exact.
struct EnumerationResult {
  std::string dist_name;
  std::size_t n = 0;
  std::uint64_t paths = 0;  // |support|^n
  std::vector<double> expected_range;               // index k = 0..n
  std::vector<double> expected_self_intersections;  // E L_k
  std::vector<double> return_probability;           // P(S_k = 0)
  std::vector<std::string> expected_range_exact;    // "num/den", reduced
};

/// Visits every path of length n. Throws ResourceError when the path count
/// exceeds max_paths or the exact numerators would overflow 128 bits.
EnumerationResult enumerate_paths(const StepDistribution& dist, std::size_t n,
                                  std::uint64_t max_paths = std::uint64_t{1} << 32);

}  // namespace rangelab
