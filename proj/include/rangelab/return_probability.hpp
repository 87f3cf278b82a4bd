#pragma once

#include <cstddef>
#include <vector>

#include "rangelab/execution.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Node budget for the full-grid quadrature (M^2 evaluations).
inline constexpr std::size_t kMaxGridNodes = std::size_t{1} << 28;

/// P(S_k = 0) as the mean of phi^k over an M x M grid of [-pi, pi)^2 with
/// M = 2 k d + 2 (d = max |step coordinate|). phi^k is a trigonometric
/// polynomial of degree <= k d per coordinate, so the grid mean is exact.
/// Throws ResourceError when M^2 exceeds `max_nodes`.
double return_prob_exact(const StepDistribution& dist, std::size_t k,
                         std::size_t max_nodes = kMaxGridNodes);

/// u_0..u_kmax by explicit convolution of the lattice law (independent oracle).
std::vector<double> return_probs_dp(const StepDistribution& dist, std::size_t kmax);

/// u_0..u_n for long tables.
///
/// Small k use the exact grid. Larger k use a grid whose aliasing error is
/// bounded by Hoeffding's inequality (<= 1e-20 absolute) and sum only the nodes
/// where |phi|^k can exceed 1e-20; the discarded mass is below 1e-20 per k.
/// The kernel runs over chunks of k, so serial and parallel are bit-identical.
std::vector<double> return_probs(const StepDistribution& dist, std::size_t n,
                                 Execution exec = Execution::kParallel);

}  // namespace rangelab
