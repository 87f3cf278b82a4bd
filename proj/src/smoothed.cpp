#include "rangelab/smoothed.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include "fftw_lock.hpp"
#include "rangelab/error.hpp"
#include "rangelab/visited_set.hpp"

namespace rangelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Box {
  int x0 = 0, y0 = 0;  // lower corner
  int w = 0, h = 0;

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(x - x0) * h + static_cast<std::size_t>(y - y0);
  }
};

Box bounding_box(std::span<const Point> a, std::span<const Point> b, int margin) {
  int xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (auto span : {a, b}) {
    for (Point p : span) {
      if (first) {
        xmin = xmax = p.x;
        ymin = ymax = p.y;
        first = false;
      }
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  return {xmin - margin, ymin - margin, xmax - xmin + 2 * margin + 1, ymax - ymin + 2 * margin + 1};
}

// sum_{y in range} w(x - y) on the box.
std::vector<double> smoothed_field(std::span<const Point> range, const KernelStamp& stamp, const Box& box) {
  std::vector<double> field(static_cast<std::size_t>(box.w) * box.h, 0.0);
  const int r = stamp.reach;
  for (Point y : range) {
    for (int dx = -r; dx <= r; ++dx) {
      double* row = &field[box.index(y.x + dx, y.y - r)];
      const double* w = &stamp.weights[static_cast<std::size_t>(dx + r) * stamp.side()];
      for (int k = 0; k < stamp.side(); ++k) row[k] += w[k];
    }
  }
  return field;
}

std::vector<Point> checked_sites(std::span<const Point> range) {
  if (range.empty()) throw PreconditionError("smoothed functional: empty range");
  return distinct_sites(range);
}

struct Neumaier {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

SmoothingKernel::SmoothingKernel(KernelProfile profile, double mass_scale)
    : profile_(profile), scale_(mass_scale),
      name_(profile == KernelProfile::kCubic ? "cubic" : "quadratic") {
  const double m = mass();
  if (!(std::abs(m - 1.0) <= 1e-10))
    throw ConfigError("smoothing kernel " + name_ + " has mass " + std::to_string(m) +
                      ", expected a probability density");
}

SmoothingKernel SmoothingKernel::from_name(const std::string& name) {
  if (name == "cubic") return SmoothingKernel(KernelProfile::kCubic);
  if (name == "quadratic") return SmoothingKernel(KernelProfile::kQuadratic);
  throw ConfigError("unknown smoothing kernel '" + name + "' (expected cubic or quadratic)");
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double SmoothingKernel::mass() const {
  // Radial Gauss-Legendre on [0, 1] (exact for the polynomial profiles) times
  // an equispaced angular rule, evaluated through h(x, y).
  std::vector<double> nodes, weights;
  gauss_legendre(24, nodes, weights);
  constexpr int kAngles = 64;
  Neumaier total;
  for (int a = 0; a < kAngles; ++a) {
    const double theta = kTwoPi * a / kAngles;
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double r = 0.5 * (nodes[i] + 1.0);
      total.add(0.5 * weights[i] * r * (*this)(r * c, r * s) * (kTwoPi / kAngles));
    }
  }
  return total.value();
}

LambdaValue lambda_eps(double s, double eps, const SmoothingKernel& kernel) {
  if (!(s > 0.0) || !(eps > 0.0)) throw PreconditionError("lambda_eps: need s > 0 and eps > 0");
  LambdaValue out;
  out.radius = eps * std::sqrt(s);
  out.degenerate = out.radius < 1.0;
  const int reach = static_cast<int>(std::floor(out.radius));
  const double inv = 1.0 / out.radius;
  const double scale = 1.0 / (eps * eps);
  Neumaier total;
  for (int x = -reach; x <= reach; ++x) {
    for (int y = -reach; y <= reach; ++y) {
      const double u = x * inv, v = y * inv;
      total.add(scale * kernel(u, v));
    }
  }
  out.value = total.value();
  return out;
}

KernelStamp kernel_stamp(double t, double b, double eps, const SmoothingKernel& kernel) {
  if (!(t > 0.0) || !(b > 0.0) || !(eps > 0.0))
    throw PreconditionError("kernel_stamp: need t, b, eps > 0");
  KernelStamp st;
  st.radius = eps * std::sqrt(t / b);
  if (st.radius < 2.0)
    throw PreconditionError("degenerate smoothing: eps * sqrt(t/b) = " + std::to_string(st.radius) +
                            " is below 2 lattice spacings");
  st.reach = static_cast<int>(std::floor(st.radius));
  const double inv = 1.0 / st.radius;
  const double scale = 1.0 / (eps * eps);
  st.weights.resize(static_cast<std::size_t>(st.side()) * st.side());
  Neumaier total;
  for (int x = -st.reach; x <= st.reach; ++x) {
    for (int y = -st.reach; y <= st.reach; ++y) {
      const double w = scale * kernel(x * inv, y * inv);
      st.weights[static_cast<std::size_t>(x + st.reach) * st.side() + (y + st.reach)] = w;
      total.add(w);
    }
  }
  st.lambda = total.value();
  return st;
}

std::vector<Point> distinct_sites(std::span<const Point> points) {
  std::vector<std::uint64_t> keys;
  keys.reserve(points.size());
  for (Point p : points) keys.push_back(pack(p));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<Point> out;
  out.reserve(keys.size());
  for (auto k : keys) out.push_back(unpack(k));
  return out;
}

std::vector<Point> poisson_range(const PoissonizedPath& path, double upto) {
  const std::size_t k = path.jumps_until(upto);
  std::vector<Point> pts;
  pts.reserve(k + 1);
  pts.push_back(Point{});
  pts.insert(pts.end(), path.positions.begin(), path.positions.begin() + static_cast<std::ptrdiff_t>(k));
  return distinct_sites(pts);
}

double a_functional(std::span<const Point> range, const KernelStamp& stamp) {
  const auto sites = checked_sites(range);
  const Box box = bounding_box(sites, {}, stamp.reach);
  const auto field = smoothed_field(sites, stamp, box);
  Neumaier total;
  for (double f : field) total.add(f * f);
  return total.value() / (stamp.lambda * stamp.lambda);
}

double a_functional_dft(std::span<const Point> range, const KernelStamp& stamp) {
  const auto sites = checked_sites(range);
  const Box box = bounding_box(sites, {}, stamp.reach);
  // Cyclic convolution on a grid at least as large as the field's support is linear.
  const int mx = static_cast<int>(std::bit_ceil(static_cast<unsigned>(box.w)));
  const int my = static_cast<int>(std::bit_ceil(static_cast<unsigned>(box.h)));
  const int half = my / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(mx) * my;
  const std::size_t spec_size = static_cast<std::size_t>(mx) * half;
  double* occ = fftw_alloc_real(real_size);
  double* ker = fftw_alloc_real(real_size);
  fftw_complex* occ_hat = fftw_alloc_complex(spec_size);
  fftw_complex* ker_hat = fftw_alloc_complex(spec_size);
  fftw_plan po, pk, back;
  {
    std::lock_guard lock(detail::fftw_mutex());
    po = fftw_plan_dft_r2c_2d(mx, my, occ, occ_hat, FFTW_ESTIMATE);
    pk = fftw_plan_dft_r2c_2d(mx, my, ker, ker_hat, FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_2d(mx, my, occ_hat, occ, FFTW_ESTIMATE);
  }
  std::fill(occ, occ + real_size, 0.0);
  std::fill(ker, ker + real_size, 0.0);
  for (Point y : sites)
    occ[static_cast<std::size_t>(y.x - box.x0) * my + static_cast<std::size_t>(y.y - box.y0)] = 1.0;
  const int r = stamp.reach;
  for (int dx = -r; dx <= r; ++dx) {
    for (int dy = -r; dy <= r; ++dy) {
      const int ix = (dx + mx) % mx, iy = (dy + my) % my;
      ker[static_cast<std::size_t>(ix) * my + iy] = stamp.at(dx, dy);
    }
  }
  fftw_execute(po);
  fftw_execute(pk);
  for (std::size_t i = 0; i < spec_size; ++i) {
    const std::complex<double> a(occ_hat[i][0], occ_hat[i][1]);
    const std::complex<double> k(ker_hat[i][0], ker_hat[i][1]);
    const auto prod = a * k;
    occ_hat[i][0] = prod.real();
    occ_hat[i][1] = prod.imag();
  }
  fftw_execute(back);
  // Field at grid index (i, j) is the smoothed occupation at (x0 + i - r, ...)
  // shifted by the margin; only the sum of squares matters.
  const double norm = 1.0 / static_cast<double>(real_size);
  Neumaier total;
  for (std::size_t i = 0; i < real_size; ++i) {
    const double f = occ[i] * norm;
    total.add(f * f);
  }
  {
    std::lock_guard lock(detail::fftw_mutex());
    fftw_destroy_plan(po);
    fftw_destroy_plan(pk);
    fftw_destroy_plan(back);
  }
  fftw_free(occ);
  fftw_free(ker);
  fftw_free(occ_hat);
  fftw_free(ker_hat);
  return total.value() / (stamp.lambda * stamp.lambda);
}

double b_functional(std::span<const Point> range, std::span<const Point> other,
                    const KernelStamp& stamp) {
  const auto a = checked_sites(range);
  const auto b = checked_sites(other);
  const Box box = bounding_box(a, b, stamp.reach);
  const auto fa = smoothed_field(a, stamp, box);
  const auto fb = smoothed_field(b, stamp, box);
  Neumaier total;
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (fa[i] != 0.0 && fb[i] != 0.0) total.add(fa[i] * fb[i]);
  return total.value() / (stamp.lambda * stamp.lambda);
}

double b_functional(const PoissonizedPath& z, const PoissonizedPath& z2, double t, int j,
                    const KernelStamp& stamp) {
  if (j < 0) throw PreconditionError("b_functional: truncation level must be nonnegative");
  const double upto = std::ldexp(t, -j);
  return b_functional(poisson_range(z, upto), poisson_range(z2, upto), stamp);
}

double QKernel::total() const {
  Neumaier sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

QKernel q_kernel(const KernelStamp& stamp) {
  QKernel q;
  const int r = stamp.reach;
  q.reach = 2 * r;
  const int side = q.side();
  q.values.assign(static_cast<std::size_t>(side) * side, 0.0);
  const double norm = 1.0 / (stamp.lambda * stamp.lambda);
  auto slot = [&](int x, int y) -> double& {
    return q.values[static_cast<std::size_t>(x + q.reach) * side + (y + q.reach)];
  };
  // Half plane, then mirror so that q(x) = q(-x) holds bit for bit.
  for (int x = 0; x <= q.reach; ++x) {
    for (int y = -q.reach; y <= q.reach; ++y) {
      if (x == 0 && y < 0) continue;
      double sum = 0.0;
      for (int zx = std::max(-r, x - r); zx <= std::min(r, x + r); ++zx)
        for (int zy = std::max(-r, y - r); zy <= std::min(r, y + r); ++zy)
          sum += stamp.at(x - zx, y - zy) * stamp.at(zx, zy);
      slot(x, y) = sum * norm;
      slot(-x, -y) = sum * norm;
    }
  }
  return q;
}

double q_weighted_intersection(const QKernel& q, std::span<const Point> range,
                               std::span<const Point> other) {
  const auto a = checked_sites(range);
  const auto b = checked_sites(other);
  VisitedSet in_a(a.size());
  for (Point p : a) in_a.insert(p);
  Neumaier total;
  for (int x = -q.reach; x <= q.reach; ++x) {
    for (int y = -q.reach; y <= q.reach; ++y) {
      const double weight = q.at(x, y);
      if (weight == 0.0) continue;
      std::size_t overlap = 0;
      for (Point p : b) overlap += in_a.contains(p + Point{x, y}) ? 1 : 0;
      if (overlap) total.add(weight * static_cast<double>(overlap));
    }
  }
  return total.value();
}

ParsevalResult parseval_check(std::span<const Point> range, std::span<const Point> other,
                              const KernelStamp& stamp, double s, int window) {
  const auto a = checked_sites(range);
  const auto b = checked_sites(other);
  const Box box = bounding_box(a, b, stamp.reach);
  const int cover = static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(box.w, box.h))));
  const int m = window == 0 ? 2 * cover : window;
  if (m < cover)
    throw PreconditionError("parseval_check: window " + std::to_string(m) +
                            " is smaller than the covering size " + std::to_string(cover));

  ParsevalResult out;
  out.window = m;
  out.lattice_side = kTwoPi * kTwoPi * s * b_functional(a, b, stamp);

  const std::size_t size = static_cast<std::size_t>(m) * m;
  fftw_complex* p = fftw_alloc_complex(size);
  fftw_complex* ya = fftw_alloc_complex(size);
  fftw_complex* yb = fftw_alloc_complex(size);
  fftw_plan pp, pa, pb;
  {
    std::lock_guard lock(detail::fftw_mutex());
    pp = fftw_plan_dft_2d(m, m, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pa = fftw_plan_dft_2d(m, m, ya, ya, FFTW_FORWARD, FFTW_ESTIMATE);
    pb = fftw_plan_dft_2d(m, m, yb, yb, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  std::fill(&p[0][0], &p[0][0] + 2 * size, 0.0);
  std::fill(&ya[0][0], &ya[0][0] + 2 * size, 0.0);
  std::fill(&yb[0][0], &yb[0][0] + 2 * size, 0.0);
  const int r = stamp.reach;
  for (int dx = -r; dx <= r; ++dx)
    for (int dy = -r; dy <= r; ++dy)
      p[static_cast<std::size_t>((dx + m) % m) * m + (dy + m) % m][0] = stamp.at(dx, dy) / stamp.lambda;
  // A common shift of both ranges leaves Y conj(Y') unchanged.
  for (Point y : a) ya[static_cast<std::size_t>(y.x - box.x0) * m + (y.y - box.y0)][0] = 1.0;
  for (Point y : b) yb[static_cast<std::size_t>(y.x - box.x0) * m + (y.y - box.y0)][0] = 1.0;
  fftw_execute(pp);
  fftw_execute(pa);
  fftw_execute(pb);
  // The integrand is a trigonometric polynomial whose frequencies all lie
  // strictly inside the grid, so the grid mean is its exact average.
  Neumaier total;
  for (std::size_t i = 0; i < size; ++i) {
    const double p2 = p[i][0] * p[i][0] + p[i][1] * p[i][1];
    const double cross = ya[i][0] * yb[i][0] + ya[i][1] * yb[i][1];
    total.add(p2 * cross);
  }
  out.fourier_side = s * kTwoPi * kTwoPi * total.value() / static_cast<double>(size);
  {
    std::lock_guard lock(detail::fftw_mutex());
    fftw_destroy_plan(pp);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
  }
  fftw_free(p);
  fftw_free(ya);
  fftw_free(yb);
  const double diff = std::abs(out.lattice_side - out.fourier_side);
  out.residual = out.lattice_side != 0.0 ? diff / std::abs(out.lattice_side) : diff;
  return out;
}

SmoothedFieldStats smoothed_field_stats(const PoissonizedPath& z, const PoissonizedPath& z2,
                                        double t, double b, double eps,
                                        const SmoothingKernel& kernel, int max_j) {
  const KernelStamp stamp = kernel_stamp(t, b, eps, kernel);
  SmoothedFieldStats out;
  out.t = t;
  out.b = b;
  out.eps = eps;
  out.lambda = stamp.lambda;
  const auto range = poisson_range(z, t);
  const auto other = poisson_range(z2, t);
  out.a = a_functional(range, stamp);
  for (int j = 0; j <= max_j; ++j) out.b_values.push_back(b_functional(z, z2, t, j, stamp));
  const QKernel q = q_kernel(stamp);
  out.q_mass = q.total();
  out.q_weighted = q_weighted_intersection(q, range, other);
  return out;
}

}  // namespace rangelab
