#include "rangelab/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rangelab/error.hpp"
#include "rangelab/rng.hpp"

namespace rangelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void fill_mass(RadialGrid& g) {
  g.mass.assign(g.r.size(), 0.0);
  for (std::size_t e = 0; e + 1 < g.r.size(); ++e) {
    const double a = g.r[e], b = g.r[e + 1], h = b - a;
    g.mass[e] += kTwoPi * h * (2.0 * a + b) / 6.0;
    g.mass[e + 1] += kTwoPi * h * (a + 2.0 * b) / 6.0;
  }
}

// 2 pi * integral of r over the element / h^2, times h: the stiffness weight.
double stiffness(const RadialGrid& g, std::size_t e) {
  const double a = g.r[e], b = g.r[e + 1];
  return kTwoPi * 0.5 * (a + b) / (b - a);
}

void normalize(const RadialGrid& grid, std::vector<double>& f) {
  double l2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) l2 += grid.mass[i] * f[i] * f[i];
  const double s = 1.0 / std::sqrt(l2);
  for (double& v : f) v *= s;
}

// Solves (W + tau K) x = rhs for the free nodes 0..N-1 (f_N = 0).
void implicit_solve(const RadialGrid& grid, double tau, std::vector<double>& rhs) {
  const std::size_t n = grid.size() - 1;
  std::vector<double> diag(n), upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = grid.mass[i];
  for (std::size_t e = 0; e < n; ++e) {
    const double k = tau * stiffness(grid, e);
    diag[e] += k;
    if (e + 1 < n) {
      diag[e + 1] += k;
      upper[e] = -k;
    }
  }
  // Thomas algorithm on the symmetric tridiagonal system.
  for (std::size_t i = 1; i < n; ++i) {
    const double m = upper[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

RadialGrid RadialGrid::uniform(std::size_t nodes, double radius) { return graded(nodes, radius, 0.0); }

RadialGrid RadialGrid::graded(std::size_t nodes, double radius, double grading) {
  if (nodes < 3 || !(radius > 0.0) || grading < 0.0)
    throw PreconditionError("radial grid needs at least 3 nodes, positive radius, grading >= 0");
  RadialGrid g;
  g.r.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(nodes - 1);
    g.r[i] = radius * (s + grading * s * s) / (1.0 + grading);
  }
  g.r.back() = radius;
  fill_mass(g);
  return g;
}

RadialGrid RadialGrid::scaled(double a) const {
  RadialGrid g;
  g.r.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g.r[i] = r[i] / a;
  fill_mass(g);
  return g;
}

double RadialNorms::objective() const { return std::sqrt(l4_fourth) - 0.5 * grad_squared; }

RadialNorms radial_norms(const RadialGrid& grid, std::span<const double> f) {
  if (f.size() != grid.size()) throw PreconditionError("radial_norms: size mismatch");
  RadialNorms n;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v2 = f[i] * f[i];
    n.l2_squared += grid.mass[i] * v2;
    n.l4_fourth += grid.mass[i] * v2 * v2;
  }
  for (std::size_t e = 0; e + 1 < f.size(); ++e) {
    const double d = f[e + 1] - f[e];
    n.grad_squared += stiffness(grid, e) * d * d;
  }
  return n;
}

KappaResult kappa22_solve(const KappaOptions& opt) {
  if (opt.nodes < 256 || opt.radius < 10.0)
    throw PreconditionError("kappa22_solve: need at least 256 nodes and outer radius >= 10");
  const RadialGrid grid = opt.grading > 0.0 ? RadialGrid::graded(opt.nodes, opt.radius, opt.grading)
                                            : RadialGrid::uniform(opt.nodes, opt.radius);
  const std::size_t free_nodes = grid.size() - 1;
  double tau = opt.step;
  KappaResult res;
  for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
    std::vector<double> f(grid.size(), 0.0);
    for (std::size_t i = 0; i < free_nodes; ++i)
      f[i] = std::exp(-0.5 * grid.r[i] * grid.r[i] / (opt.initial_width * opt.initial_width));
    normalize(grid, f);
    res = KappaResult{};
    res.restarts = attempt;
    double reference = radial_norms(grid, f).objective();
    bool diverged = false;
    std::vector<double> rhs(free_nodes);
    for (std::size_t step = 1; step <= opt.max_steps; ++step) {
      double l4 = 0.0;
      for (std::size_t i = 0; i < free_nodes; ++i) l4 += grid.mass[i] * std::pow(f[i], 4);
      const double l4_sq = std::sqrt(l4);
      // Multiplier of the constraint ||f||_2 = 1 at the current iterate, so a
      // constrained stationary point is an exact fixed point of the step.
      double pull = 0.0;
      for (std::size_t i = 0; i < free_nodes; ++i)
        pull += grid.mass[i] * 2.0 * std::pow(f[i], 4) / l4_sq;
      const double mu = pull - radial_norms(grid, f).grad_squared;
      for (std::size_t i = 0; i < free_nodes; ++i)
        rhs[i] = grid.mass[i] * (f[i] + tau * (2.0 * f[i] * f[i] * f[i] / l4_sq - mu * f[i]));
      implicit_solve(grid, tau, rhs);
      std::copy(rhs.begin(), rhs.end(), f.begin());
      normalize(grid, f);
      const RadialNorms n = radial_norms(grid, f);
      res.max_normalization_error =
          std::max(res.max_normalization_error, std::abs(std::sqrt(n.l2_squared) - 1.0));
      const double obj = n.objective();
      if (!std::isfinite(obj)) {
        diverged = true;
        break;
      }
      res.steps = step;
      if (step % opt.window == 0) {
        res.history.push_back(obj);
        if (std::abs(obj - reference) < opt.tolerance) {
          res.converged = true;
          break;
        }
        reference = obj;
      }
    }
    if (diverged) {
      tau *= 0.5;
      continue;
    }
    res.state.grid = grid;
    res.state.f = f;
    res.state.norms = radial_norms(grid, f);
    res.state.objective = res.state.norms.objective();
    res.state.weinstein = res.state.norms.weinstein();
    res.objective = res.state.objective;
    res.weinstein = res.state.weinstein;
    res.m_hat = 0.5 * res.weinstein;
    res.last_free_value = f[free_nodes - 1];
    return res;
  }
  throw ResourceError("kappa22_solve: objective diverged after " + std::to_string(opt.max_restarts) +
                      " step halvings");
}

RefinementStudy kappa22_refinement(std::span<const std::size_t> node_counts, const KappaOptions& base,
                                   double threshold) {
  RefinementStudy study;
  study.stable = true;
  for (std::size_t nodes : node_counts) {
    KappaOptions opt = base;
    opt.nodes = nodes;
    study.runs.push_back(kappa22_solve(opt));
    if (study.runs.size() >= 2) {
      const double prev = study.runs[study.runs.size() - 2].m_hat;
      const double rel = std::abs(study.runs.back().m_hat - prev) / prev;
      study.relative_changes.push_back(rel);
      study.stable = study.stable && rel < threshold;
    }
  }
  if (!study.runs.empty()) study.m_hat = study.runs.back().m_hat;
  if (!study.relative_changes.empty()) study.uncertainty = study.relative_changes.back() * study.m_hat;
  return study;
}

double gaussian_weinstein() {
  // ||f||_2^2 = pi, ||f||_4^4 = pi/2, ||grad f||_2^2 = pi.
  const double pi = std::numbers::pi;
  return (pi / 2.0) / (pi * pi);
}

double rescaled_weinstein(const VariationalState& state, double amplitude, double dilation) {
  const RadialGrid grid = state.grid.scaled(dilation);
  std::vector<double> f(state.f);
  for (double& v : f) v *= amplitude;
  return radial_norms(grid, f).weinstein();
}

GnAuditResult gn_audit(double m_hat, const VariationalState& optimizer, std::size_t trials,
                       std::uint64_t seed, double slack) {
  GnAuditResult out;
  out.trials = trials;
  out.bound = 2.0 * m_hat + slack;
  CounterRng rng(SeedId{seed, 0}, StreamPurpose::kTestFunction);
  const std::size_t planar = trials - trials * 3 / 10;
  constexpr int kGrid = 384;
  constexpr double kBox = 6.0;  // functions supported in [-kBox, kBox]^2
  const double h = 2.0 * kBox / kGrid;
  for (std::size_t t = 0; t < trials; ++t) {
    double quotient = 0.0;
    if (t < planar) {
      const int bumps = 1 + static_cast<int>(rng.below(4));
      struct Bump {
        double cx, cy, s, c;
      };
      std::vector<Bump> bs;
      for (int k = 0; k < bumps; ++k) {
        const double s = 0.8 + 1.7 * rng.uniform();
        bs.push_back({(2.0 * rng.uniform() - 1.0) * (kBox - s), (2.0 * rng.uniform() - 1.0) * (kBox - s), s,
                      (rng.uniform() < 0.25 ? -1.0 : 1.0) * (0.2 + rng.uniform())});
      }
      double l2 = 0.0, l4 = 0.0, grad = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        const double x = -kBox + (i + 0.5) * h;
        for (int j = 0; j < kGrid; ++j) {
          const double y = -kBox + (j + 0.5) * h;
          double v = 0.0, gx = 0.0, gy = 0.0;
          for (const auto& b : bs) {
            const double dx = (x - b.cx) / b.s, dy = (y - b.cy) / b.s;
            const double q = 1.0 - dx * dx - dy * dy;
            if (q <= 0.0) continue;
            v += b.c * q * q * q;
            const double d = b.c * 3.0 * q * q * (-2.0) / b.s;
            gx += d * dx;
            gy += d * dy;
          }
          l2 += v * v;
          l4 += v * v * v * v;
          grad += gx * gx + gy * gy;
        }
      }
      quotient = l4 / (grad * l2) / (h * h);
    } else {
      // Radial perturbation of the optimizer on its own grid.
      std::vector<double> f(optimizer.f);
      const double amp = 0.3 * rng.uniform();
      const double freq = 0.5 + 3.0 * rng.uniform();
      const double phase = kTwoPi * rng.uniform();
      const double radius = optimizer.grid.r.back();
      for (std::size_t i = 0; i < f.size(); ++i)
        f[i] *= 1.0 + amp * std::sin(freq * optimizer.grid.r[i] / radius * kTwoPi + phase);
      quotient = radial_norms(optimizer.grid, f).weinstein();
    }
    out.max_quotient = std::max(out.max_quotient, quotient);
    if (!(quotient <= out.bound)) ++out.violations;
  }
  return out;
}

}  // namespace rangelab
