#include "rangelab/enumeration.hpp"

#include <cmath>
#include <numeric>

#include "rangelab/error.hpp"

namespace rangelab {

namespace {

using u128 = unsigned __int128;

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double ratio(u128 num, u128 den) {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

struct Enumerator {
  std::vector<Point> steps;
  std::vector<std::uint64_t> weights;
  std::size_t n = 0;
  int side = 0;
  int origin = 0;
  std::vector<std::uint32_t> visits;  // per-site count on a (2 n c + 1)^2 grid
  std::vector<u128> range_sum, collision_sum, return_sum;

  void walk(std::size_t depth, Point pos, u128 weight, std::uint64_t range, std::uint64_t collisions) {
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const Point next = pos + steps[s];
      const std::size_t cell = static_cast<std::size_t>(next.x + origin) * side + (next.y + origin);
      const std::uint32_t before = visits[cell];
      const std::uint64_t r = range + (before == 0 ? 1 : 0);
      const std::uint64_t l = collisions + before;
      const u128 w = weight * weights[s];
      range_sum[depth] += w * r;
      collision_sum[depth] += w * l;
      if (next.x == 0 && next.y == 0) return_sum[depth] += w;
      if (depth < n) {
        ++visits[cell];
        walk(depth + 1, next, w, r, l);
        --visits[cell];
      }
    }
  }
};

}  // namespace

EnumerationResult enumerate_paths(const StepDistribution& dist, std::size_t n, std::uint64_t max_paths) {
  const auto entries = dist.entries();
  std::uint64_t common = 1;
  for (const auto& e : entries) common = std::lcm(common, static_cast<std::uint64_t>(e.prob.den));

  const double log_paths = static_cast<double>(n) * std::log2(static_cast<double>(entries.size()));
  if (log_paths > std::log2(static_cast<double>(max_paths)))
    throw ResourceError("enumerate_paths: " + std::to_string(entries.size()) + "^" +
                        std::to_string(n) + " paths exceed the enumeration limit");
  // Numerators are at most n * D^n.
  if (static_cast<double>(n) * std::log2(static_cast<double>(common)) +
          std::log2(static_cast<double>(n) + 1.0) * 2.0 > 126.0)
    throw ResourceError("enumerate_paths: exact numerators would overflow");

  Enumerator e;
  e.n = n;
  for (const auto& entry : entries) {
    if (entry.prob.num == 0) continue;
    e.steps.push_back(entry.step);
    e.weights.push_back(static_cast<std::uint64_t>(entry.prob.num) *
                        (common / static_cast<std::uint64_t>(entry.prob.den)));
  }
  const int c = dist.max_coordinate();
  e.origin = static_cast<int>(n) * c;
  e.side = 2 * e.origin + 1;
  e.visits.assign(static_cast<std::size_t>(e.side) * e.side, 0);
  e.range_sum.assign(n + 1, 0);
  e.collision_sum.assign(n + 1, 0);
  e.return_sum.assign(n + 1, 0);
  if (n > 0) e.walk(1, Point{}, 1, 0, 0);

  EnumerationResult out;
  out.dist_name = dist.name();
  out.n = n;
  out.paths = n == 0 ? 1 : static_cast<std::uint64_t>(std::llround(std::pow(e.steps.size(), n)));
  out.expected_range.assign(n + 1, 0.0);
  out.expected_self_intersections.assign(n + 1, 0.0);
  out.return_probability.assign(n + 1, 0.0);
  out.expected_range_exact.assign(n + 1, "0");
  out.return_probability[0] = 1.0;
  u128 den = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    den *= common;
    out.expected_range[k] = ratio(e.range_sum[k], den);
    out.expected_self_intersections[k] = ratio(e.collision_sum[k], den);
    out.return_probability[k] = ratio(e.return_sum[k], den);
    const u128 g = gcd128(e.range_sum[k], den);
    out.expected_range_exact[k] = to_string(e.range_sum[k] / g) + "/" + to_string(den / g);
  }
  return out;
}

}  // namespace rangelab
