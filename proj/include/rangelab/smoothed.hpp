#pragma once

#include <span>
#include <string>
#include <vector>

#include "rangelab/lattice.hpp"
#include "rangelab/walk.hpp"

namespace rangelab {

enum class KernelProfile {
  kCubic,      // (4/pi)(1 - |u|^2)^3 on the unit disk
  kQuadratic,  // (3/pi)(1 - |u|^2)^2 on the unit disk
};

/// Radial probability density h on the unit disk. `mass_scale` multiplies the
/// profile and exists to exercise validation: anything but 1 is rejected.
class SmoothingKernel {
 public:
  explicit SmoothingKernel(KernelProfile profile = KernelProfile::kCubic, double mass_scale = 1.0);

  /// "cubic" or "quadratic"; throws ConfigError otherwise.
  static SmoothingKernel from_name(const std::string& name);

  /// h(u) for |u|^2 = r2.
  double at_r2(double r2) const {
    if (r2 >= 1.0) return 0.0;
    const double s = 1.0 - r2;
    return profile_ == KernelProfile::kCubic ? scale_ * (4.0 / 3.141592653589793) * s * s * s
                                             : scale_ * (3.0 / 3.141592653589793) * s * s;
  }
  double operator()(double x, double y) const { return at_r2(x * x + y * y); }

  /// Integral of h over the plane by polar Gauss-Legendre quadrature.
  double mass() const;
  const std::string& name() const { return name_; }
  KernelProfile profile() const { return profile_; }

 private:
  KernelProfile profile_;
  double scale_;
  std::string name_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct LambdaValue {
  double value = 0.0;
  double radius = 0.0;      // eps sqrt(s) in lattice units
  bool degenerate = false;  // radius < 1: the support covers less than one cell
};

/// Lambda_eps(s) = sum_x h_eps(x / sqrt(s)), summed over the finite support.
LambdaValue lambda_eps(double s, double eps, const SmoothingKernel& kernel);

/// Lattice weights w(x) = h_eps(sqrt(b/t) x) on the square |x_i| <= reach.
/// Their sum is Lambda_eps(t/b).
struct KernelStamp {
  double radius = 0.0;
  int reach = 0;
  std::vector<double> weights;  // row-major over (dx, dy), dx outer
  double lambda = 0.0;

  int side() const { return 2 * reach + 1; }
  double at(int dx, int dy) const {
    return weights[static_cast<std::size_t>(dx + reach) * side() + (dy + reach)];
  }
};

/// Throws PreconditionError when eps sqrt(t/b) < 2 (degenerate smoothing).
KernelStamp kernel_stamp(double t, double b, double eps, const SmoothingKernel& kernel);

/// Distinct sites of Z[0, upto], the origin included, in pack order.
std::vector<Point> poisson_range(const PoissonizedPath& path, double upto);

/// Distinct points in pack order.
std::vector<Point> distinct_sites(std::span<const Point> points);

/// Lambda^-2 sum_x [sum_{y in Z} w(x - y)]^2 by direct stamping.
double a_functional(std::span<const Point> range, const KernelStamp& stamp);
/// Same quantity with the smoothed field built by 2D FFT convolution.
double a_functional_dft(std::span<const Point> range, const KernelStamp& stamp);

/// Lambda^-2 sum_x [sum_{y in Z} w(x - y)][sum_{y' in Z'} w(x - y')].
double b_functional(std::span<const Point> range, std::span<const Point> other,
                    const KernelStamp& stamp);

/// B^(j): both Poissonized paths truncated to [0, 2^-j t].
double b_functional(const PoissonizedPath& z, const PoissonizedPath& z2, double t, int j,
                    const KernelStamp& stamp);

/// q(x) = Lambda^-2 sum_z w(x - z) w(z) on |x_i| <= 2 reach.
struct QKernel {
  int reach = 0;
  std::vector<double> values;

  int side() const { return 2 * reach + 1; }
  double at(int dx, int dy) const {
    return values[static_cast<std::size_t>(dx + reach) * side() + (dy + reach)];
  }
  double total() const;
};

QKernel q_kernel(const KernelStamp& stamp);

/// sum_x q(x) |Z cap (x + Z')|.
double q_weighted_intersection(const QKernel& q, std::span<const Point> range,
                               std::span<const Point> other);

struct ParsevalResult {
  double lattice_side = 0.0;  // (2 pi)^2 s B with p = w / Lambda
  double fourier_side = 0.0;  // s * integral over [-pi, pi]^2 on the DFT grid
  double residual = 0.0;      // relative; absolute when the lattice side is 0
  int window = 0;             // grid size M
};

/// Evaluates both sides of the Parseval identity for the smoothed cross term,
/// with s = t/b the smoothing scale. `window` = 0 picks the smallest power of
/// two covering both ranges plus the kernel support, padded 2x; a positive
/// window smaller than the covering size throws PreconditionError.
ParsevalResult parseval_check(std::span<const Point> range, std::span<const Point> other,
                              const KernelStamp& stamp, double s, int window = 0);

struct SmoothedFieldStats {
  double t = 0.0;
  double b = 0.0;
  double eps = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  std::vector<double> b_values;  // B^(0), B^(1), ...
  double q_weighted = 0.0;       // sum_x q(x) |Z cap (x + Z')|
  double q_mass = 0.0;
};

SmoothedFieldStats smoothed_field_stats(const PoissonizedPath& z, const PoissonizedPath& z2,
                                        double t, double b, double eps,
                                        const SmoothingKernel& kernel, int max_j);

}  // namespace rangelab
