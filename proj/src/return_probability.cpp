#include "rangelab/return_probability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rangelab/error.hpp"

namespace rangelab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// -log of the per-k aliasing and truncation budgets (1e-20 absolute).
const double kAliasLog = std::log(4e20);
const double kWindowLog = std::log(1e20);
constexpr std::size_t kChunk = 256;

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct GridNodes {
  std::size_t k_lo = 0, k_hi = 0;
  double grid = 0.0;  // M
  std::vector<double> phi;
  std::vector<double> log_abs;
  std::vector<double> weight;
};

std::size_t required_grid(std::size_t k, int d) {
  auto m = static_cast<std::size_t>(
      std::ceil(std::sqrt(2.0 * static_cast<double>(k) * d * d * kAliasLog)));
  return m + (m & 1u);
}

// Lower bound estimate of (1 - |phi|) / dist(l, peaks)^2 over the torus.
double curvature_floor(const StepDistribution& dist) {
  constexpr int kScan = 512;
  const bool two_peaks = dist.period() == 2;
  double best = 1e300;
  for (int i = 0; i < kScan; ++i) {
    for (int j = 0; j < kScan; ++j) {
      if (i == 0 && j == 0) continue;
      const double a = kTwoPi * i / kScan, b = kTwoPi * j / kScan;
      auto wrap = [](double v) { return std::min(v, kTwoPi - v); };
      double d2 = wrap(a) * wrap(a) + wrap(b) * wrap(b);
      if (two_peaks) {
        const double pa = std::abs(a - std::numbers::pi), pb = std::abs(b - std::numbers::pi);
        d2 = std::min(d2, pa * pa + pb * pb);
      }
      if (d2 < 1e-20) continue;
      const double phi = dist.characteristic(a, b);
      best = std::min(best, (1.0 - std::abs(phi)) / d2);
    }
  }
  return 0.5 * best;
}

GridNodes select_nodes(const StepDistribution& dist, std::size_t k_lo, std::size_t k_hi,
                       double curvature) {
  GridNodes g;
  g.k_lo = k_lo;
  g.k_hi = k_hi;
  const std::size_t m = required_grid(k_hi, dist.max_coordinate());
  g.grid = static_cast<double>(m);
  const double rho = std::sqrt(kWindowLog / (static_cast<double>(k_lo) * curvature));
  const auto half = static_cast<long>(std::ceil(rho * g.grid / kTwoPi)) + 1;
  const bool full = 2 * half + 1 >= static_cast<long>(m / 2);
  const bool two_peaks = dist.period() == 2;
  const long mm = static_cast<long>(m);

  auto visit = [&](long i, long j) {
    i = ((i % mm) + mm) % mm;
    j = ((j % mm) + mm) % mm;
    const long ni = (mm - i) % mm, nj = (mm - j) % mm;
    double w;
    if (i == ni && j == nj) {
      w = 1.0;
    } else if (i < ni || (i == ni && j < nj)) {
      w = 2.0;  // stands for the pair (l, -l); phi is even
    } else {
      return;
    }
    double a = kTwoPi * static_cast<double>(i) / g.grid;
    double b = kTwoPi * static_cast<double>(j) / g.grid;
    double sign = 1.0;
    // Evaluate 1 - |phi| relative to the nearest peak so it keeps full precision.
    if (two_peaks) {
      const bool near_pi = std::min(std::abs(a - std::numbers::pi), kTwoPi - std::abs(a - std::numbers::pi)) +
                               std::min(std::abs(b - std::numbers::pi), kTwoPi - std::abs(b - std::numbers::pi)) <
                           std::min(a, kTwoPi - a) + std::min(b, kTwoPi - b);
      if (near_pi) {
        a -= std::numbers::pi;
        b -= std::numbers::pi;
        sign = -1.0;
      }
    }
    const double omc = dist.one_minus_characteristic(a, b);
    const double inner = 1.0 - omc;  // phi at the shifted point
    if (inner == 0.0) return;
    if (inner < 0.0) sign = -sign;
    const double log_abs = omc < 0.5 ? std::log1p(-omc) : std::log(std::abs(inner));
    if (static_cast<double>(k_lo) * -log_abs > kWindowLog) return;
    g.phi.push_back(sign * std::abs(inner));
    g.log_abs.push_back(log_abs);
    g.weight.push_back(w);
  };

  if (full) {
    for (long i = 0; i < mm; ++i)
      for (long j = 0; j < mm; ++j) visit(i, j);
  } else {
    for (long i = -half; i <= half; ++i)
      for (long j = -half; j <= half; ++j) visit(i, j);
    if (two_peaks)
      for (long i = -half; i <= half; ++i)
        for (long j = -half; j <= half; ++j) visit(mm / 2 + i, mm / 2 + j);
  }
  return g;
}

void evaluate_chunk(const GridNodes& g, std::size_t k0, std::size_t k1, std::vector<double>& v,
                    std::vector<double>& u) {
  const std::size_t n = g.phi.size();
  v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::exp(static_cast<double>(k0) * g.log_abs[i]);
    v[i] = (g.phi[i] < 0.0 && (k0 & 1u)) ? -mag : mag;
  }
  const double norm = 1.0 / (g.grid * g.grid);
  for (std::size_t k = k0; k <= k1; ++k) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      acc[0] += g.weight[i] * v[i];
      acc[1] += g.weight[i + 1] * v[i + 1];
      acc[2] += g.weight[i + 2] * v[i + 2];
      acc[3] += g.weight[i + 3] * v[i + 3];
      v[i] *= g.phi[i];
      v[i + 1] *= g.phi[i + 1];
      v[i + 2] *= g.phi[i + 2];
      v[i + 3] *= g.phi[i + 3];
    }
    for (; i < n; ++i) {
      acc[0] += g.weight[i] * v[i];
      v[i] *= g.phi[i];
    }
    u[k] = std::max(0.0, ((acc[0] + acc[1]) + (acc[2] + acc[3])) * norm);
  }
}

}  // namespace

double return_prob_exact(const StepDistribution& dist, std::size_t k, std::size_t max_nodes) {
  if (k == 0) return 1.0;
  const double span = 2.0 * static_cast<double>(k) * dist.max_coordinate() + 2.0;
  if (span * span > static_cast<double>(max_nodes))
    throw ResourceError("grid for P(S_k = 0) needs " + std::to_string(span * span) +
                        " nodes, above the budget of " + std::to_string(max_nodes));
  const auto m = static_cast<std::size_t>(span);
  std::vector<double> cos_table(m);
  for (std::size_t a = 0; a < m; ++a) cos_table[a] = std::cos(kTwoPi * static_cast<double>(a) / static_cast<double>(m));

  const auto entries = dist.entries();
  const auto mm = static_cast<long>(m);
  CompensatedSum total;
  for (long i = 0; i < mm; ++i) {
    for (long j = 0; j < mm; ++j) {
      double phi = 0.0;
      for (const auto& e : entries) {
        long a = (i * e.step.x + j * e.step.y) % mm;
        if (a < 0) a += mm;
        phi += e.prob.value() * cos_table[static_cast<std::size_t>(a)];
      }
      total.add(std::pow(phi, static_cast<double>(k)));
    }
  }
  const double u = total.value() / (static_cast<double>(m) * static_cast<double>(m));
  if (dist.period() == 2 && (k & 1u)) return 0.0;
  return std::clamp(u, 0.0, 1.0);
}

std::vector<double> return_probs_dp(const StepDistribution& dist, std::size_t kmax) {
  const long d = dist.max_coordinate();
  const long radius = static_cast<long>(kmax) * d;
  const long side = 2 * radius + 1;
  if (static_cast<double>(side) * side > static_cast<double>(kMaxGridNodes))
    throw ResourceError("lattice convolution window too large");
  std::vector<double> cur(static_cast<std::size_t>(side * side), 0.0), next(cur.size());
  auto at = [&](long x, long y) { return static_cast<std::size_t>((x + radius) * side + (y + radius)); };
  cur[at(0, 0)] = 1.0;
  std::vector<double> u(kmax + 1, 0.0);
  u[0] = 1.0;
  const auto entries = dist.entries();
  for (std::size_t k = 1; k <= kmax; ++k) {
    const long reach = static_cast<long>(k) * d;
    const long prev = reach - d;
    std::fill(next.begin(), next.end(), 0.0);
    for (long x = -prev; x <= prev; ++x) {
      for (long y = -prev; y <= prev; ++y) {
        const double mass = cur[at(x, y)];
        if (mass == 0.0) continue;
        for (const auto& e : entries) next[at(x + e.step.x, y + e.step.y)] += mass * e.prob.value();
      }
    }
    std::swap(cur, next);
    u[k] = cur[at(0, 0)];
  }
  return u;
}

std::vector<double> return_probs(const StepDistribution& dist, std::size_t n, Execution exec) {
  std::vector<double> u(n + 1, 0.0);
  u[0] = 1.0;
  const int d = dist.max_coordinate();

  std::size_t exact_until = 1;
  while (2 * (exact_until + 1) * static_cast<std::size_t>(d) + 2 <= required_grid(exact_until + 1, d))
    ++exact_until;
  for (std::size_t k = 1; k <= std::min(n, exact_until); ++k) u[k] = return_prob_exact(dist, k);
  if (n <= exact_until) return u;

  const double curvature = curvature_floor(dist);
  std::vector<GridNodes> bands;
  for (std::size_t lo = exact_until + 1; lo <= n; lo *= 2)
    bands.push_back(select_nodes(dist, lo, std::min(n, 2 * lo - 1), curvature));

  struct Chunk {
    const GridNodes* band;
    std::size_t k0, k1;
  };
  std::vector<Chunk> chunks;
  for (const auto& b : bands)
    for (std::size_t k0 = b.k_lo; k0 <= b.k_hi; k0 += kChunk)
      chunks.push_back({&b, k0, std::min(b.k_hi, k0 + kChunk - 1)});

  const auto count = static_cast<long>(chunks.size());
  if (exec == Execution::kSerial) {
    std::vector<double> v;
    for (long c = 0; c < count; ++c) evaluate_chunk(*chunks[c].band, chunks[c].k0, chunks[c].k1, v, u);
  } else {
#pragma omp parallel
    {
      std::vector<double> v;
#pragma omp for schedule(dynamic, 1)
      for (long c = 0; c < count; ++c) evaluate_chunk(*chunks[c].band, chunks[c].k0, chunks[c].k1, v, u);
    }
  }
  if (dist.period() == 2)
    for (std::size_t k = 1; k <= n; k += 2) u[k] = 0.0;
  return u;
}

}  // namespace rangelab
