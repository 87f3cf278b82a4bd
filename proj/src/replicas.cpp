#include "rangelab/replicas.hpp"

#include <algorithm>

#include "rangelab/error.hpp"
#include "rangelab/visited_set.hpp"
#include "rangelab/walk.hpp"

namespace rangelab {

namespace {

void check_checkpoints(std::span<const std::size_t> checkpoints) {
  if (checkpoints.empty()) throw PreconditionError("replica request without checkpoints");
  if (checkpoints.front() == 0) throw PreconditionError("checkpoints must be positive");
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1])
      throw PreconditionError("checkpoints must be strictly increasing");
}

void range_kernel(const StepDistribution& dist, const ReplicaRequest& req, SeedId seed,
                  VisitedSet& seen, std::uint32_t* range, double* max_centered,
                  std::uint64_t* collisions) {
  seen.clear();
  StepStream stream(dist, seed);
  const std::size_t n = req.checkpoints.back();
  const bool centered = !req.expected_range.empty();
  std::uint32_t r = 0;
  std::uint64_t l = 0;
  double best = -1e300;
  std::size_t c = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    const std::uint32_t before = seen.add(stream.next());
    r += before == 0 ? 1 : 0;
    l += before;
    if (centered) best = std::max(best, static_cast<double>(r) - req.expected_range[m]);
    if (m == req.checkpoints[c]) {
      range[c] = r;
      if (max_centered) max_centered[c] = best;
      if (collisions) collisions[c] = l;
      ++c;
    }
  }
}

template <class Body>
void for_each_replica(std::size_t count, Execution exec, std::size_t reserve, Body body) {
  if (exec == Execution::kParallel) {
#pragma omp parallel
    {
      VisitedSet seen(reserve);
#pragma omp for schedule(dynamic, 4)
      for (std::size_t i = 0; i < count; ++i) body(i, seen);
    }
  } else {
    VisitedSet seen(reserve);
    for (std::size_t i = 0; i < count; ++i) body(i, seen);
  }
}

}  // namespace

ReplicaBatch simulate_ranges(const StepDistribution& dist, const ReplicaRequest& request,
                             std::uint64_t master, std::uint64_t first_replica, std::size_t count,
                             Execution exec) {
  check_checkpoints(request.checkpoints);
  const std::size_t n = request.checkpoints.back();
  if (!request.expected_range.empty() && request.expected_range.size() <= n)
    throw PreconditionError("expected-range table shorter than the longest checkpoint");
  if (static_cast<double>(n) * dist.max_coordinate() >= 2147483647.0)
    throw ResourceError("path length would overflow 32-bit coordinates");

  ReplicaBatch out;
  out.master = master;
  out.first_replica = first_replica;
  out.count = count;
  out.checkpoints = request.checkpoints;
  const std::size_t k = request.checkpoints.size();
  out.range.assign(count * k, 0);
  if (!request.expected_range.empty()) out.max_centered.assign(count * k, 0.0);
  if (request.self_intersections) out.self_intersections.assign(count * k, 0);

  for_each_replica(count, exec, std::max<std::size_t>(64, n / 8),
                   [&](std::size_t i, VisitedSet& seen) {
                     range_kernel(dist, request, SeedId{master, first_replica + i}, seen,
                                  &out.range[i * k],
                                  out.max_centered.empty() ? nullptr : &out.max_centered[i * k],
                                  out.self_intersections.empty() ? nullptr
                                                                 : &out.self_intersections[i * k]);
                   });
  return out;
}

std::vector<std::uint32_t> intersection_profile(std::span<const std::vector<Point>> paths,
                                                std::span<const std::size_t> checkpoints) {
  check_checkpoints(checkpoints);
  // (key, first visit time) per walk; common keys keep the latest first visit.
  using Entry = std::pair<std::uint64_t, std::uint32_t>;
  std::vector<Entry> common;
  for (std::size_t w = 0; w < paths.size(); ++w) {
    const auto& path = paths[w];
    if (path.size() < checkpoints.back()) throw PreconditionError("path shorter than checkpoint");
    std::vector<Entry> firsts;
    firsts.reserve(checkpoints.back());
    for (std::size_t m = 0; m < checkpoints.back(); ++m)
      firsts.emplace_back(pack(path[m]), static_cast<std::uint32_t>(m + 1));
    std::sort(firsts.begin(), firsts.end());
    firsts.erase(std::unique(firsts.begin(), firsts.end(),
                             [](const Entry& a, const Entry& b) { return a.first == b.first; }),
                 firsts.end());
    if (w == 0) {
      common = std::move(firsts);
      continue;
    }
    std::vector<Entry> merged;
    std::size_t i = 0, j = 0;
    while (i < common.size() && j < firsts.size()) {
      if (common[i].first < firsts[j].first) {
        ++i;
      } else if (firsts[j].first < common[i].first) {
        ++j;
      } else {
        merged.emplace_back(common[i].first, std::max(common[i].second, firsts[j].second));
        ++i;
        ++j;
      }
    }
    common = std::move(merged);
  }
  std::vector<std::uint32_t> times;
  times.reserve(common.size());
  for (const auto& e : common) times.push_back(e.second);
  std::sort(times.begin(), times.end());
  std::vector<std::uint32_t> out;
  for (std::size_t c : checkpoints)
    out.push_back(static_cast<std::uint32_t>(
        std::upper_bound(times.begin(), times.end(), static_cast<std::uint32_t>(c)) - times.begin()));
  return out;
}

IntersectionBatch simulate_intersections(const StepDistribution& dist, std::size_t p,
                                         std::span<const std::size_t> checkpoints,
                                         std::uint64_t master, std::uint64_t first_replica,
                                         std::size_t count, Execution exec) {
  if (p < 2) throw PreconditionError("intersections need at least two walks");
  check_checkpoints(checkpoints);
  IntersectionBatch out;
  out.p = p;
  out.master = master;
  out.first_replica = first_replica;
  out.count = count;
  out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  const std::size_t k = checkpoints.size();
  const std::size_t n = checkpoints.back();
  out.intersections.assign(count * k, 0);
  for_each_replica(count, exec, 16, [&](std::size_t i, VisitedSet&) {
    std::vector<std::vector<Point>> paths(p);
    for (std::size_t w = 0; w < p; ++w)
      paths[w] = sample_path(dist, n, SeedId{master, first_replica + i}, static_cast<std::uint32_t>(w))
                     .positions;
    const auto j = intersection_profile(paths, checkpoints);
    std::copy(j.begin(), j.end(), out.intersections.begin() + static_cast<std::ptrdiff_t>(i * k));
  });
  return out;
}

}  // namespace rangelab
