#include "rangelab/return_table.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fftw_lock.hpp"
#include "rangelab/error.hpp"
#include "rangelab/return_probability.hpp"
#include "rangelab/text_io.hpp"

namespace rangelab {
namespace {

constexpr std::size_t kBlock = 1024;

// acc[j & 3] += f[j] u[m - j] for j in [j0, j1), ascending within each lane.
inline void accumulate(const double* f, const double* u, std::size_t m, std::size_t j0,
                       std::size_t j1, double acc[4]) {
  std::size_t j = j0;
  for (; j < j1 && (j & 3u); ++j) acc[j & 3u] += f[j] * u[m - j];
  for (; j + 4 <= j1; j += 4) {
    acc[0] += f[j] * u[m - j];
    acc[1] += f[j + 1] * u[m - j - 1];
    acc[2] += f[j + 2] * u[m - j - 2];
    acc[3] += f[j + 3] * u[m - j - 3];
  }
  for (; j < j1; ++j) acc[j & 3u] += f[j] * u[m - j];
}

inline double combine(const double acc[4]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

struct Compensated {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Linear convolution of a and b truncated to `len` terms.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b, std::size_t len) {
  std::size_t size = 1;
  while (size < a.size() + b.size()) size <<= 1;
  const std::size_t half = size / 2 + 1;
  auto* ra = fftw_alloc_real(size);
  auto* rb = fftw_alloc_real(size);
  auto* ca = fftw_alloc_complex(half);
  auto* cb = fftw_alloc_complex(half);
  fftw_plan pa, pb, back;
  {
    std::lock_guard lock(detail::fftw_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(size), ra, ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(size), rb, cb, FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_1d(static_cast<int>(size), ca, ra, FFTW_ESTIMATE);
  }
  std::fill(ra, ra + size, 0.0);
  std::fill(rb, rb + size, 0.0);
  std::copy(a.begin(), a.end(), ra);
  std::copy(b.begin(), b.end(), rb);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < half; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re;
    ca[i][1] = im;
  }
  fftw_execute(back);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = i < size ? ra[i] / static_cast<double>(size) : 0.0;
  {
    std::lock_guard lock(detail::fftw_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(back);
  }
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(ca);
  fftw_free(cb);
  return out;
}

}  // namespace

std::vector<double> nonreturn_direct(std::span<const double> u, Execution exec) {
  const std::size_t n = u.size() - 1;
  std::vector<double> f(n + 1);
  f[0] = 1.0;
  if (exec == Execution::kSerial) {
    for (std::size_t m = 1; m <= n; ++m) {
      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      accumulate(f.data(), u.data(), m, 0, m, acc);
      f[m] = 1.0 - combine(acc);
    }
    return f;
  }
  std::vector<double> hist(4 * kBlock);
  for (std::size_t m0 = 1; m0 <= n; m0 += kBlock) {
    const std::size_t m1 = std::min(n + 1, m0 + kBlock);
    // The history boundary is m0 rounded down to a lane boundary so the
    // per-lane summation order matches the serial loop.
    const std::size_t split = m0 & ~std::size_t{3};
    const auto count = static_cast<long>(m1 - m0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
      double* acc = &hist[4 * static_cast<std::size_t>(i)];
      acc[0] = acc[1] = acc[2] = acc[3] = 0.0;
      accumulate(f.data(), u.data(), m0 + static_cast<std::size_t>(i), 0, split, acc);
    }
    for (std::size_t m = m0; m < m1; ++m) {
      double* acc = &hist[4 * (m - m0)];
      accumulate(f.data(), u.data(), m, split, m, acc);
      f[m] = 1.0 - combine(acc);
    }
  }
  return f;
}

std::vector<double> nonreturn_newton(std::span<const double> u) {
  const std::size_t len = u.size();
  std::vector<double> v{1.0 / u[0]};
  while (v.size() < len) {
    const std::size_t cur = v.size();
    const std::size_t next = std::min(len, 2 * cur);
    // e = U v mod s^next; its low part is [1, 0, ...] so only e[cur..next) matters.
    const auto e = convolve(u.subspan(0, next), v, next);
    std::vector<double> hi(e.begin() + static_cast<long>(cur), e.end());
    const auto corr = convolve(v, hi, next - cur);
    v.resize(next);
    for (std::size_t i = 0; i < next - cur; ++i) v[cur + i] = -corr[i];
  }
  std::vector<double> f(len);
  Compensated acc;
  for (std::size_t i = 0; i < len; ++i) {
    acc.add(v[i]);
    f[i] = acc.value();
  }
  return f;
}

ReturnProbTable table_from_returns(const StepDistribution& dist, std::vector<double> u,
                                   const TableOptions& opts) {
  if (u.size() < 2) throw PreconditionError("return table needs n >= 1");
  ReturnProbTable t;
  t.dist_name = dist.name();
  t.dist_hash = dist.hash();
  t.two_pi_sqrt_det = dist.two_pi_sqrt_det();
  t.n = u.size() - 1;
  t.f = t.n <= opts.direct_limit ? nonreturn_direct(u, opts.exec) : nonreturn_newton(u);
  t.u = std::move(u);
  t.H.resize(t.n + 1);
  t.r.assign(t.n + 1, 0.0);
  t.ER.assign(t.n + 1, 0.0);
  Compensated h, er;
  for (std::size_t k = 0; k <= t.n; ++k) {
    h.add(t.u[k]);
    t.H[k] = h.value();
    if (k >= 1) {
      t.r[k] = t.f[k - 1] - t.f[k];
      er.add(t.f[k - 1]);
      t.ER[k] = er.value();
    }
  }
  return t;
}

ReturnProbTable build_return_table(const StepDistribution& dist, std::size_t n,
                                   const TableOptions& opts) {
  if (n < 1) throw PreconditionError("return table needs n >= 1");
  return table_from_returns(dist, return_probs(dist, n, opts.exec), opts);
}

double ReturnProbTable::h_difference(std::size_t n_hi, std::size_t m_lo) const {
  if (n_hi > n || m_lo > n_hi) throw PreconditionError("h_difference needs m <= n <= table size");
  Compensated s;
  for (std::size_t k = m_lo + 1; k <= n_hi; ++k) s.add(u[k]);
  return s.value();
}

double ReturnProbTable::renewal_residual(std::size_t upto) const {
  upto = std::min(upto, n);
  double worst = 0.0;
  for (std::size_t m = 1; m <= upto; ++m) {
    Compensated s;
    for (std::size_t j = 1; j <= m; ++j) s.add(r[j] * u[m - j]);
    worst = std::max(worst, std::abs(u[m] - s.value()));
  }
  return worst;
}

void write_table_csv(const ReturnProbTable& t, const std::filesystem::path& file,
                     std::span<const double> enumerated_er) {
  std::string out = enumerated_er.empty() ? "k,u,H,r,f,ER\n" : "k,u,H,r,f,ER,ER_enum\n";
  for (std::size_t k = 0; k <= t.n; ++k) {
    out += std::to_string(k) + ',' + format_double(t.u[k]) + ',' + format_double(t.H[k]) + ',' +
           format_double(t.r[k]) + ',' + format_double(t.f[k]) + ',' + format_double(t.ER[k]);
    if (!enumerated_er.empty()) {
      out += ',';
      if (k < enumerated_er.size()) out += format_double(enumerated_er[k]);
    }
    out += '\n';
  }
  write_file_atomic(file, out);
}

ReturnProbTable cached_return_table(const StepDistribution& dist, std::size_t n,
                                    const std::filesystem::path& cache_dir,
                                    const TableOptions& opts) {
  char name[64];
  std::snprintf(name, sizeof name, "returns-%016llx-%zu.csv",
                static_cast<unsigned long long>(dist.hash()), n);
  const auto file = cache_dir / name;
  if (std::filesystem::exists(file)) {
    std::istringstream in(read_file(file));
    std::string line;
    std::getline(in, line);
    std::vector<double> u;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      u.push_back(std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr));
    }
    if (u.size() == n + 1) return table_from_returns(dist, std::move(u), opts);
  }
  auto t = build_return_table(dist, n, opts);
  write_table_csv(t, file);
  return t;
}

RangeAsymptotics expected_range_asymptotic(const ReturnProbTable& t, std::size_t n) {
  if (n < 2 || n > t.n) throw PreconditionError("expected_range_asymptotic needs 2 <= n <= table size");
  RangeAsymptotics a;
  const double nn = static_cast<double>(n);
  const double h = t.H[n];
  a.leading = nn / h;
  a.second_order = a.leading + nn / (t.two_pi_sqrt_det * h * h);
  a.h_asymptotic = std::log(nn) / t.two_pi_sqrt_det;
  a.exact_er = t.ER[n];
  a.ratio = a.exact_er / a.leading;
  a.scaled_residual = (a.exact_er - a.leading) * h * h / nn;
  return a;
}

LocalCltReport local_clt_check(const StepDistribution& dist, const ReturnProbTable& t, std::size_t n) {
  if (!dist.strongly_aperiodic())
    throw PreconditionError("local CLT check requires a strongly aperiodic walk; '" + dist.name() +
                            "' has period " + std::to_string(dist.period()) +
                            ", so P(S_n = 0) vanishes on a residue class of n");
  if (n < 2 || n > t.n) throw PreconditionError("local CLT check needs 2 <= n <= table size");
  LocalCltReport rep;
  rep.n = n;
  rep.scaled_return = static_cast<double>(n) * t.u[n];
  rep.limit = 1.0 / t.two_pi_sqrt_det;
  rep.deviation = std::abs(rep.scaled_return / rep.limit - 1.0);
  return rep;
}

HDifference h_difference(const ReturnProbTable& t, std::size_t n, std::size_t m) {
  if (m < 1 || m > n) throw PreconditionError("h_difference needs 1 <= m <= n");
  return {t.h_difference(n, m),
          std::log(static_cast<double>(n) / static_cast<double>(m)) / t.two_pi_sqrt_det};
}

}  // namespace rangelab
