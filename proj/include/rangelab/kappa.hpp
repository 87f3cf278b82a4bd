#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rangelab {

/// Radial functions on [0, R] with f(R) = 0, discretized with piecewise-linear
/// elements: lumped mass for the L2 and L4 norms, exact element stiffness for
/// the Dirichlet energy. All norms are planar (they carry the 2 pi).
struct RadialGrid {
  std::vector<double> r;     // r[0] = 0 < ... < r[N] = R
  std::vector<double> mass;  // integral of each hat function times 2 pi r

  static RadialGrid uniform(std::size_t nodes, double radius);
  /// Nodes clustered toward the origin: r = R * (s + g s^2) / (1 + g) on s uniform.
  static RadialGrid graded(std::size_t nodes, double radius, double grading);

  std::size_t size() const { return r.size(); }
  /// Same grid with every radius divided by a.
  RadialGrid scaled(double a) const;
};

struct RadialNorms {
  double l2_squared = 0.0;
  double l4_fourth = 0.0;
  double grad_squared = 0.0;

  /// ||f||_4^4 / (||grad f||_2^2 ||f||_2^2).
  double weinstein() const { return l4_fourth / (grad_squared * l2_squared); }
  /// ||f||_4^2 - ||grad f||_2^2 / 2.
  double objective() const;
};

RadialNorms radial_norms(const RadialGrid& grid, std::span<const double> f);

struct VariationalState {
  RadialGrid grid;
  std::vector<double> f;
  RadialNorms norms;
  double objective = 0.0;
  double weinstein = 0.0;
};

struct KappaOptions {
  std::size_t nodes = 512;
  double radius = 32.0;
  double grading = 3.0;  // 0 gives a uniform grid
  double step = 1.0;
  double tolerance = 1e-10;  // objective change over `window` steps
  std::size_t window = 100;
  std::size_t max_steps = 200000;
  int max_restarts = 5;
  double initial_width = 2.0;
};

struct KappaResult {
  /// sup ||f||_4^4 / (2 ||grad f||_2^2) over ||f||_2 = 1: half the Weinstein quotient.
  double m_hat = 0.0;
  double objective = 0.0;
  double weinstein = 0.0;
  VariationalState state;
  std::size_t steps = 0;
  int restarts = 0;
  bool converged = false;
  double max_normalization_error = 0.0;  // | ||f||_2 - 1 | over all projections
  double last_free_value = 0.0;          // f at the node before the outer boundary
  std::vector<double> history;           // objective every `window` steps
};

/// Projected semi-implicit ascent of ||f||_4^2 - ||grad f||^2 / 2 with
/// renormalization to ||f||_2 = 1 after every step. A NaN halves the step and
/// restarts; after max_restarts it throws ResourceError.
KappaResult kappa22_solve(const KappaOptions& options = {});

struct RefinementStudy {
  std::vector<KappaResult> runs;
  std::vector<double> relative_changes;  // between consecutive refinements
  double m_hat = 0.0;                    // finest grid
  double uncertainty = 0.0;              // last relative change times m_hat
  bool stable = false;                   // all changes < threshold
};

RefinementStudy kappa22_refinement(std::span<const std::size_t> node_counts,
                                   const KappaOptions& base = {}, double threshold = 1e-3);

/// Weinstein quotient of exp(-|x|^2 / 2) from its closed-form integrals: 1/(2 pi).
double gaussian_weinstein();

struct GnAuditResult {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_quotient = 0.0;  // largest Weinstein quotient seen
  double bound = 0.0;         // 2 M + slack
};

/// Checks ||f||_4^4 <= (2 m_hat + slack) ||grad f||^2 ||f||^2 on random smooth
/// compactly supported functions: planar sums of (1 - |x - c|^2/s^2)^3 bumps
/// integrated on a 2D grid, and radial perturbations of `optimizer`.
GnAuditResult gn_audit(double m_hat, const VariationalState& optimizer, std::size_t trials,
                       std::uint64_t seed, double slack = 1e-6);

/// Weinstein quotient of a f(a x) for the given state (grid rescaled exactly).
double rescaled_weinstein(const VariationalState& state, double amplitude, double dilation);

}  // namespace rangelab
