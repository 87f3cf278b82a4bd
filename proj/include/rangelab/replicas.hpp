#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rangelab/execution.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// What each simulated path reports at its checkpoints.
struct ReplicaRequest {
  std::vector<std::size_t> checkpoints;  // strictly increasing, >= 1
  /// E R_k indexed by k; when set, the running max of R_m - E R_m is tracked.
  std::span<const double> expected_range;
  bool self_intersections = false;
};

/// Replica r of the batch uses seed (master, first_replica + r). Values are
/// stored replica-major: index r * checkpoints.size() + c.
struct ReplicaBatch {
  std::uint64_t master = 0;
  std::uint64_t first_replica = 0;
  std::size_t count = 0;
  std::vector<std::size_t> checkpoints;
  std::vector<std::uint32_t> range;
  std::vector<double> max_centered;              // max_{m <= n_c} (R_m - E R_m)
  std::vector<std::uint64_t> self_intersections;  // L_{n_c}

  std::size_t at(std::size_t replica, std::size_t c) const {
    return replica * checkpoints.size() + c;
  }
};

/// Range statistics of `count` independent paths. The serial and parallel
/// drivers run the same per-replica kernel into disjoint slots, so their
/// outputs are identical.
ReplicaBatch simulate_ranges(const StepDistribution& dist, const ReplicaRequest& request,
                             std::uint64_t master, std::uint64_t first_replica, std::size_t count,
                             Execution exec);

/// p-fold intersection counts J_{n_c} of p walks from the origin; walk i of
/// replica r uses substream i of seed (master, first_replica + r).
struct IntersectionBatch {
  std::size_t p = 0;
  std::uint64_t master = 0;
  std::uint64_t first_replica = 0;
  std::size_t count = 0;
  std::vector<std::size_t> checkpoints;
  std::vector<std::uint32_t> intersections;
};

IntersectionBatch simulate_intersections(const StepDistribution& dist, std::size_t p,
                                         std::span<const std::size_t> checkpoints,
                                         std::uint64_t master, std::uint64_t first_replica,
                                         std::size_t count, Execution exec);

/// J at each checkpoint for explicit paths; exposed for testing.
std::vector<std::uint32_t> intersection_profile(std::span<const std::vector<Point>> paths,
                                                std::span<const std::size_t> checkpoints);

}  // namespace rangelab
