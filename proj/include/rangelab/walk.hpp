#pragma once

#include <cstdint>
#include <vector>

#include "rangelab/lattice.hpp"
#include "rangelab/rng.hpp"
#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Discrete trajectory S_1..S_n (S_0 = origin is implicit).
struct WalkPath {
  std::vector<Point> positions;
  SeedId seed;

  std::size_t steps() const { return positions.size(); }
};

/// Continuous-time walk Z_s, s <= horizon, with rate-1 exponential holding
/// times. The embedded chain is the discrete path drawn from the same seed, so
/// Z and S are coupled step for step.
struct PoissonizedPath {
  double horizon = 0.0;
  std::vector<double> jump_times;   // strictly increasing, all <= horizon
  std::vector<Point> positions;     // embedded S_1..S_{N_t}
  SeedId seed;

  std::size_t jumps() const { return jump_times.size(); }
  /// Number of jumps in [0, s].
  std::size_t jumps_until(double s) const;
};

/// `substream` selects independent walks under one seed (walk i of a p-tuple).
WalkPath sample_path(const StepDistribution& dist, std::size_t n, SeedId seed,
                     std::uint32_t substream = 0);

PoissonizedPath sample_poissonized(const StepDistribution& dist, double horizon, SeedId seed,
                                   std::uint32_t substream = 0);

/// Streaming step source; sample_path is built on it.
class StepStream {
 public:
  StepStream(const StepDistribution& dist, SeedId seed, std::uint32_t substream = 0)
      : dist_(&dist), rng_(seed, StreamPurpose::kSteps, substream) {}

  Point next() noexcept {
    const Point s = dist_->sample(rng_);
    pos_ = pos_ + s;
    return pos_;
  }
  Point position() const noexcept { return pos_; }

 private:
  const StepDistribution* dist_;
  CounterRng rng_;
  Point pos_{};
};

}  // namespace rangelab
