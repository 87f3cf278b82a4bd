#include "rangelab/walk.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "rangelab/error.hpp"

namespace rangelab {

WalkPath sample_path(const StepDistribution& dist, std::size_t n, SeedId seed,
                     std::uint32_t substream) {
  const auto bound = static_cast<double>(n) * dist.max_coordinate();
  if (bound >= static_cast<double>(std::numeric_limits<std::int32_t>::max()))
    throw ResourceError("path length would overflow 32-bit coordinates");
  WalkPath path;
  path.seed = seed;
  path.positions.resize(n);
  StepStream stream(dist, seed, substream);
  for (auto& p : path.positions) p = stream.next();
  return path;
}

PoissonizedPath sample_poissonized(const StepDistribution& dist, double horizon, SeedId seed,
                                   std::uint32_t substream) {
  if (!(horizon >= 0.0)) throw PreconditionError("horizon must be nonnegative");
  PoissonizedPath z;
  z.horizon = horizon;
  z.seed = seed;
  CounterRng clock(seed, StreamPurpose::kClock, substream);
  StepStream stream(dist, seed, substream);
  double s = clock.exponential();
  while (s <= horizon) {
    z.jump_times.push_back(s);
    z.positions.push_back(stream.next());
    // A zero holding time would repeat a jump time; it has probability 2^-53.
    double dt = clock.exponential();
    while (dt == 0.0) dt = clock.exponential();
    s += dt;
  }
  return z;
}

std::size_t PoissonizedPath::jumps_until(double s) const {
  return static_cast<std::size_t>(
      std::upper_bound(jump_times.begin(), jump_times.end(), s) - jump_times.begin());
}

}  // namespace rangelab
