#include "rangelab/step_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rangelab/error.hpp"

namespace rangelab {
namespace {

using i128 = __int128;

// Index of the subgroup of Z^2 generated by `vs` (0 if rank < 2): the gcd of
// all 2x2 minors.
std::int64_t lattice_index(const std::vector<Point>& vs) {
  std::int64_t g = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const std::int64_t minor = static_cast<std::int64_t>(vs[i].x) * vs[j].y -
                                 static_cast<std::int64_t>(vs[i].y) * vs[j].x;
      g = std::gcd(g, std::llabs(minor));
    }
  }
  return g;
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw ConfigError("probability denominator must be positive");
  const std::int64_t g = std::gcd(std::llabs(num), den);
  return {num / (g ? g : 1), den / (g ? g : 1)};
}

ValidationReport StepDistribution::inspect(std::span<const StepEntry> entries) {
  ValidationReport rep;
  if (entries.empty()) {
    rep.problems.emplace_back("empty support");
    return rep;
  }

  rep.nonnegative = std::all_of(entries.begin(), entries.end(),
                                [](const StepEntry& e) { return e.prob.num >= 0; });
  if (!rep.nonnegative) rep.problems.emplace_back("negative probability");

  // Exact sum over a common denominator.
  i128 lcm = 1;
  bool overflow = false;
  for (const auto& e : entries) {
    lcm = lcm / std::gcd(static_cast<std::int64_t>(lcm), e.prob.den) * e.prob.den;
    if (lcm > (i128{1} << 62)) overflow = true;
  }
  if (!overflow) {
    i128 total = 0;
    for (const auto& e : entries) total += e.prob.num * (lcm / e.prob.den);
    rep.sums_to_one = (total == lcm);
  } else {
    double total = 0.0;
    for (const auto& e : entries) total += e.prob.value();
    rep.sums_to_one = std::abs(total - 1.0) <= 1e-12;
  }
  if (!rep.sums_to_one) rep.problems.emplace_back("probabilities do not sum to 1");

  std::map<std::pair<int, int>, Rational> law;
  for (const auto& e : entries) {
    auto key = std::make_pair(e.step.x, e.step.y);
    if (law.count(key)) {
      rep.problems.emplace_back("duplicate support point");
      return rep;
    }
    law[key] = e.prob;
  }

  rep.symmetric = true;
  for (const auto& [pt, p] : law) {
    auto it = law.find({-pt.first, -pt.second});
    if (it == law.end() || !(it->second == p)) {
      rep.symmetric = false;
      break;
    }
  }
  if (!rep.symmetric) rep.problems.emplace_back("distribution is not symmetric");

  double m1 = 0.0, m2 = 0.0;
  Matrix2 cov{};
  for (const auto& e : entries) {
    const double p = e.prob.value();
    m1 += p * e.step.x;
    m2 += p * e.step.y;
    cov[0][0] += p * e.step.x * e.step.x;
    cov[0][1] += p * e.step.x * e.step.y;
    cov[1][1] += p * e.step.y * e.step.y;
  }
  cov[1][0] = cov[0][1];
  rep.mean_zero = std::abs(m1) <= 1e-12 && std::abs(m2) <= 1e-12;
  if (!rep.mean_zero) rep.problems.emplace_back("mean is not zero");
  rep.covariance = cov;
  rep.det_covariance = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
  rep.nondegenerate = rep.det_covariance > 1e-12;
  if (!rep.nondegenerate) rep.problems.emplace_back("degenerate covariance (det Gamma = 0)");

  std::vector<Point> support;
  for (const auto& e : entries)
    if (e.prob.num > 0) support.push_back(e.step);

  rep.full_lattice = lattice_index(support) == 1;
  if (!rep.full_lattice) rep.problems.emplace_back("support generates a proper sublattice");

  // Strong aperiodicity: the differences of the support generate Z^2.
  std::vector<Point> diffs;
  for (const auto& a : support)
    for (const auto& b : support)
      if (!(a == b)) diffs.push_back(a - b);
  rep.strongly_aperiodic = rep.full_lattice && lattice_index(diffs) == 1;

  // For a full-lattice walk the only obstruction is a parity class: every step
  // has odd a.x for some corner a of {0,1}^2, forcing even return times.
  rep.period = 1;
  if (rep.full_lattice && !rep.strongly_aperiodic) rep.period = 2;
  return rep;
}

StepDistribution::StepDistribution(std::string name, std::vector<StepEntry> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  for (auto& e : entries_) e.prob = make_rational(e.prob.num, e.prob.den);
  report_ = inspect(entries_);
  if (!report_.ok()) {
    std::string msg = "invalid step distribution '" + name_ + "':";
    for (const auto& p : report_.problems) msg += " " + p + ";";
    throw ConfigError(msg);
  }
  std::sort(entries_.begin(), entries_.end(), [](const StepEntry& a, const StepEntry& b) {
    return pack(a.step) < pack(b.step);
  });
  for (const auto& e : entries_) {
    max_coord_ = std::max({max_coord_, std::abs(e.step.x), std::abs(e.step.y)});
    if (e.prob.num > 0) {
      points_.push_back(e.step);
      probs_.push_back(e.prob.value());
    }
  }
  build_alias();
}

void StepDistribution::build_alias() {
  const std::size_t n = points_.size();
  alias_size_ = n;
  constexpr i128 kUnit = i128{1} << 32;
  std::vector<i128> q(n);
  i128 total = 0;
  std::size_t largest = 0;
  std::size_t k = 0;
  for (const auto& e : entries_) {
    if (e.prob.num <= 0) continue;
    // Round to nearest; exact whenever den divides n * 2^32.
    const i128 scaled = static_cast<i128>(e.prob.num) * static_cast<i128>(n) * kUnit;
    q[k] = (2 * scaled + e.prob.den) / (2 * static_cast<i128>(e.prob.den));
    total += q[k];
    if (q[k] > q[largest]) largest = k;
    ++k;
  }
  q[largest] += static_cast<i128>(n) * kUnit - total;

  threshold_.assign(n, static_cast<std::uint64_t>(kUnit));
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), 0u);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) (q[i] < kUnit ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    threshold_[s] = static_cast<std::uint64_t>(q[s]);
    alias_[s] = static_cast<std::uint32_t>(l);
    q[l] -= kUnit - q[s];
    if (q[l] < kUnit) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

StepDistribution StepDistribution::srw() {
  return StepDistribution("srw", {{{1, 0}, {1, 4}}, {{-1, 0}, {1, 4}}, {{0, 1}, {1, 4}},
                                  {{0, -1}, {1, 4}}});
}

StepDistribution StepDistribution::lazy_srw() {
  return StepDistribution("lazy-srw", {{{0, 0}, {1, 2}},
                                       {{1, 0}, {1, 8}},
                                       {{-1, 0}, {1, 8}},
                                       {{0, 1}, {1, 8}},
                                       {{0, -1}, {1, 8}}});
}

StepDistribution StepDistribution::king() {
  std::vector<StepEntry> e;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx != 0 || dy != 0) e.push_back({{dx, dy}, {1, 8}});
  return StepDistribution("king", std::move(e));
}

StepDistribution StepDistribution::builtin(const std::string& name) {
  if (name == "srw") return srw();
  if (name == "lazy-srw") return lazy_srw();
  if (name == "king") return king();
  throw ConfigError("unknown built-in distribution '" + name + "' (expected srw, lazy-srw, king)");
}

double StepDistribution::two_pi_sqrt_det() const {
  return 2.0 * std::numbers::pi * std::sqrt(report_.det_covariance);
}

double StepDistribution::characteristic(double l1, double l2) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i)
    s += probs_[i] * std::cos(l1 * points_[i].x + l2 * points_[i].y);
  return s;
}

double StepDistribution::one_minus_characteristic(double l1, double l2) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double h = std::sin(0.5 * (l1 * points_[i].x + l2 * points_[i].y));
    s += 2.0 * probs_[i] * h * h;
  }
  return s;
}

std::string StepDistribution::canonical() const {
  std::ostringstream os;
  os << name_ << ':';
  for (const auto& e : entries_)
    os << e.step.x << ',' << e.step.y << ',' << e.prob.num << '/' << e.prob.den << ';';
  return os.str();
}

std::uint64_t StepDistribution::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rangelab
