#include "rangelab/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rangelab/error.hpp"

namespace rangelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_or_neg_inf(double p) { return p > 0.0 ? std::log(p) : -kInf; }

TailRow make_row(std::size_t n, double b, const char* side, const char* variant, double level,
                 double threshold, std::uint64_t count, std::uint64_t total) {
  TailRow row;
  row.n = n;
  row.b = b;
  row.side = side;
  row.variant = variant;
  row.level = level;
  row.threshold = threshold;
  row.exceedances = count;
  row.replicas = total;
  row.frequency = static_cast<double>(count) / static_cast<double>(total);
  row.zero_count = count == 0;
  row.low_count = count < 30;
  row.ci = wilson_interval(count, total);
  if (row.zero_count) row.ci = {0.0, zero_count_upper_bound(total)};
  row.rate = log_or_neg_inf(row.frequency) / b;
  row.rate_ci = {log_or_neg_inf(row.ci.lo) / b, log_or_neg_inf(row.ci.hi) / b};
  row.rate_theta = log_or_neg_inf(row.frequency) / std::pow(b, level);
  return row;
}

std::uint64_t count_at_least(std::span<const double> x, double threshold) {
  std::uint64_t c = 0;
  for (double v : x) c += v >= threshold ? 1 : 0;
  return c;
}

}  // namespace

ScheduleFlags check_schedule(std::span<const std::size_t> ns, std::span<const double> bs) {
  if (ns.empty() || ns.size() != bs.size())
    throw ConfigError("b schedule must have one value per ladder point");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 3) throw ConfigError("ladder points must be at least 3");
    if (!(bs[i] > 1.0)) throw ConfigError("b_n must exceed 1");
    if (i > 0 && ns[i] <= ns[i - 1]) throw ConfigError("n ladder must be strictly increasing");
    if (i > 0 && bs[i] <= bs[i - 1]) throw ConfigError("b_n must increase along the ladder");
  }
  ScheduleFlags f;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double ln = std::log(static_cast<double>(ns[i]));
    f.upper_ratio.push_back(std::log(bs[i]) / std::sqrt(ln));
    f.lower_ratio.push_back(bs[i] / std::pow(ln, 0.2));
  }
  auto passes = [](const std::vector<double>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
      if (r[i] > r[i - 1]) return false;
    return r.back() < 1.0;
  };
  f.upper_ok = passes(f.upper_ratio);
  f.lower_ok = passes(f.lower_ratio);
  if (!f.upper_ok)
    f.warnings.push_back("b schedule does not look like log b_n = o((log n)^{1/2}) on this ladder");
  if (!f.lower_ok)
    f.warnings.push_back("b schedule does not look like b_n = o((log n)^{1/5}) on this ladder");
  return f;
}

std::vector<std::vector<double>> centered_samples(const StepDistribution& dist,
                                                  const ReturnProbTable& table,
                                                  std::span<const std::size_t> ns,
                                                  std::size_t replicas, std::uint64_t seed,
                                                  Execution exec) {
  if (ns.empty() || table.n < ns.back())
    throw PreconditionError("return table does not reach the largest ladder point");
  ReplicaRequest req;
  req.checkpoints.assign(ns.begin(), ns.end());
  const ReplicaBatch batch = simulate_ranges(dist, req, seed, 0, replicas, exec);
  std::vector<std::vector<double>> out(ns.size(), std::vector<double>(replicas));
  for (std::size_t c = 0; c < ns.size(); ++c)
    for (std::size_t r = 0; r < replicas; ++r)
      out[c][r] = static_cast<double>(batch.range[batch.at(r, c)]) - table.ER[ns[c]];
  return out;
}

std::vector<TailRow> upper_tail_rows(const StepDistribution& dist, const ReturnProbTable& table,
                                     std::size_t n, double b, std::span<const double> thetas,
                                     std::span<const double> centered) {
  const double ln = std::log(static_cast<double>(n));
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) / b));
  const double h_form = static_cast<double>(n) / (table.H[n] * table.H[n]) * table.h_difference(n, m);
  std::vector<TailRow> rows;
  for (double theta : thetas) {
    const double corollary = theta * dist.two_pi_sqrt_det() * static_cast<double>(n) * std::log(b) / (ln * ln);
    rows.push_back(make_row(n, b, "upper", "corollary", theta, corollary,
                            count_at_least(centered, corollary), centered.size()));
    const double exact = theta * h_form;
    rows.push_back(make_row(n, b, "upper", "exact-H", theta, exact, count_at_least(centered, exact),
                            centered.size()));
  }
  return rows;
}

std::vector<TailRow> lower_tail_rows(std::size_t n, double b, std::span<const double> lambdas,
                                     std::span<const double> centered) {
  const double ln = std::log(static_cast<double>(n));
  std::vector<TailRow> rows;
  for (double lambda : lambdas) {
    const double threshold = lambda * static_cast<double>(n) * b / (ln * ln);
    std::uint64_t c = 0;
    for (double v : centered) c += -v >= threshold ? 1 : 0;
    rows.push_back(make_row(n, b, "lower", "lower", lambda, threshold, c, centered.size()));
  }
  return rows;
}

TailReport mc_upper_tail(const StepDistribution& dist, const ReturnProbTable& table,
                         const DeviationProbe& probe) {
  if (probe.replicas < 10000) throw ConfigError("tail probes need at least 10^4 replicas");
  TailReport rep;
  rep.flags = check_schedule(probe.ns, probe.bs);
  const auto samples = centered_samples(dist, table, probe.ns, probe.replicas, probe.seed, probe.exec);
  for (std::size_t i = 0; i < probe.ns.size(); ++i) {
    auto rows = upper_tail_rows(dist, table, probe.ns[i], probe.bs[i], probe.thetas, samples[i]);
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  return rep;
}

TailReport mc_lower_tail(const StepDistribution& dist, const ReturnProbTable& table,
                         const DeviationProbe& probe) {
  if (probe.replicas < 10000) throw ConfigError("tail probes need at least 10^4 replicas");
  TailReport rep;
  rep.flags = check_schedule(probe.ns, probe.bs);
  const auto samples = centered_samples(dist, table, probe.ns, probe.replicas, probe.seed, probe.exec);
  for (std::size_t i = 0; i < probe.ns.size(); ++i) {
    auto rows = lower_tail_rows(probe.ns[i], probe.bs[i], probe.lambdas, samples[i]);
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  return rep;
}

AsymmetryReport tail_asymmetry(std::size_t n, std::span<const double> centered) {
  AsymmetryReport rep;
  rep.n = n;
  rep.replicas = centered.size();
  rep.moments = moments(centered);
  rep.a = 2.0 * rep.moments.sd;
  for (double v : centered) {
    rep.upper_count += v > rep.a ? 1 : 0;
    rep.lower_count += -v > rep.a ? 1 : 0;
  }
  rep.upper_ci = wilson_interval(rep.upper_count, rep.replicas);
  rep.lower_ci = wilson_interval(rep.lower_count, rep.replicas);
  rep.positive_skew = rep.moments.skewness > 0.0;
  rep.upper_heavier = rep.upper_count > rep.lower_count;
  return rep;
}

MomentMode moment_mode_from_name(const std::string& name) {
  if (name == "abs-range") return MomentMode::kAbsRange;
  if (name == "signed-range") return MomentMode::kSignedRange;
  if (name == "p-intersection") return MomentMode::kIntersection;
  throw ConfigError("unknown moment mode '" + name + "' (abs-range, signed-range, p-intersection)");
}

std::string moment_mode_name(MomentMode mode) {
  switch (mode) {
    case MomentMode::kAbsRange:
      return "abs-range";
    case MomentMode::kSignedRange:
      return "signed-range";
    case MomentMode::kIntersection:
      return "p-intersection";
  }
  return "?";
}

double moment_exponent(MomentMode mode, double theta, std::size_t n, double value, std::size_t p) {
  const double ln = std::log(static_cast<double>(n));
  const double nn = static_cast<double>(n);
  switch (mode) {
    case MomentMode::kSignedRange:
      return theta * ln * ln / nn * value;
    case MomentMode::kAbsRange:
      return theta * ln * ln / nn * std::abs(value);
    case MomentMode::kIntersection: {
      if (p < 2) throw PreconditionError("intersection moments need p >= 2");
      const double base = std::pow(ln, static_cast<double>(p)) / nn * value;
      return theta * std::pow(base, 1.0 / static_cast<double>(p - 1));
    }
  }
  return 0.0;
}

MomentCurve moment_curve(MomentMode mode, double theta, std::size_t p, std::span<const std::size_t> ns,
                         const std::vector<std::vector<double>>& values, int resamples,
                         std::uint64_t seed) {
  MomentCurve curve;
  curve.mode = mode;
  curve.theta = theta;
  curve.p = p;
  std::vector<double> logs;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> ex(values[i].size());
    for (std::size_t r = 0; r < ex.size(); ++r) ex[r] = moment_exponent(mode, theta, ns[i], values[i][r], p);
    MomentPoint pt;
    pt.n = ns[i];
    pt.replicas = ex.size();
    pt.log_mean = log_mean_exp(ex);
    pt.mean = std::exp(pt.log_mean);
    pt.log_ci = bootstrap_log_mean_exp(ex, resamples, 0.95, SeedId{seed, 0}, static_cast<std::uint32_t>(i));
    curve.points.push_back(pt);
    logs.push_back(pt.log_mean);
  }
  const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  curve.max_min_ratio = std::exp(*hi - *lo);
  curve.monotone_growth = strictly_increasing(logs);
  curve.kendall_tau = kendall_tau(logs);
  return curve;
}

MomentCurve exp_moment_probe(const StepDistribution& dist, const ReturnProbTable& table,
                             const MomentProbe& probe) {
  if (probe.replicas < 10000) throw ConfigError("moment probes need at least 10^4 replicas");
  if (probe.ns.empty()) throw ConfigError("moment probe needs a ladder");
  std::vector<std::vector<double>> values;
  if (probe.mode == MomentMode::kIntersection) {
    const IntersectionBatch batch =
        simulate_intersections(dist, probe.p, probe.ns, probe.seed, 0, probe.replicas, probe.exec);
    values.assign(probe.ns.size(), std::vector<double>(probe.replicas));
    for (std::size_t c = 0; c < probe.ns.size(); ++c)
      for (std::size_t r = 0; r < probe.replicas; ++r)
        values[c][r] = batch.intersections[r * probe.ns.size() + c];
  } else {
    values = centered_samples(dist, table, probe.ns, probe.replicas, probe.seed, probe.exec);
  }
  return moment_curve(probe.mode, probe.theta, probe.p, probe.ns, values, probe.resamples, probe.seed);
}

double upper_lil_scale(std::size_t n) {
  const long double x = static_cast<long double>(n);
  const long double l = std::log(x);
  const long double ll = std::log(l);
  if (!(ll > 1.0L)) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(x * std::log(ll) / (l * l));
}

double lower_lil_scale(std::size_t n) {
  const long double x = static_cast<long double>(n);
  const long double l = std::log(x);
  const long double ll = std::log(l);
  if (!(ll > 0.0L)) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(x * ll / (l * l));
}

LilReport lil_trajectory(const StepDistribution& dist, const ReturnProbTable& table,
                         std::span<const std::size_t> ns, std::size_t trajectories,
                         std::span<const double> lower_reference, std::uint64_t seed, Execution exec) {
  LilReport rep;
  rep.trajectories = trajectories;
  rep.upper_reference = dist.two_pi_sqrt_det();
  rep.lower_reference.assign(lower_reference.begin(), lower_reference.end());
  std::vector<std::size_t> kept;
  for (std::size_t n : ns) (std::isnan(upper_lil_scale(n)) ? rep.skipped : kept).push_back(n);
  rep.ns = kept;
  if (kept.empty()) return rep;
  const auto samples = centered_samples(dist, table, kept, trajectories, seed, exec);
  const std::size_t k = kept.size();
  rep.upper_running_max.assign(trajectories * k, 0.0);
  rep.lower_running_max.assign(trajectories * k, 0.0);
  for (std::size_t t = 0; t < trajectories; ++t) {
    double up = -kInf, low = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
      up = std::max(up, samples[i][t] / upper_lil_scale(kept[i]));
      low = std::max(low, -samples[i][t] / lower_lil_scale(kept[i]));
      rep.upper_running_max[t * k + i] = up;
      rep.lower_running_max[t * k + i] = low;
    }
  }
  return rep;
}

MaxExceedance running_max_exceedance(const StepDistribution& dist, const ReturnProbTable& table,
                                     std::size_t n, std::span<const double> lambdas,
                                     std::size_t replicas, std::uint64_t seed, Execution exec) {
  const double scale = upper_lil_scale(n);
  if (std::isnan(scale)) throw PreconditionError("running_max_exceedance: n must exceed e^e");
  if (table.n < n) throw PreconditionError("return table does not reach n");
  ReplicaRequest req;
  req.checkpoints = {n};
  req.expected_range = table.ER;
  const ReplicaBatch batch = simulate_ranges(dist, req, seed, 0, replicas, exec);
  MaxExceedance out;
  out.n = n;
  out.replicas = replicas;
  out.lambdas.assign(lambdas.begin(), lambdas.end());
  std::sort(out.lambdas.begin(), out.lambdas.end());
  for (double lambda : out.lambdas) {
    std::uint64_t c = 0;
    for (double v : batch.max_centered) c += v > lambda * scale ? 1 : 0;
    out.counts.push_back(c);
    out.ci.push_back(wilson_interval(c, replicas));
  }
  out.nonincreasing = std::is_sorted(out.counts.rbegin(), out.counts.rend());
  return out;
}

std::vector<std::uint64_t> log_grid(std::size_t points, std::uint64_t top) {
  if (points < 2 || top < 1) throw PreconditionError("log_grid: need at least two points");
  const double lt = std::log(static_cast<double>(top));
  std::vector<std::uint64_t> g;
  for (std::size_t i = 0; i < points; ++i) {
    const double e = static_cast<double>(i) / static_cast<double>(points - 1);
    g.push_back(static_cast<std::uint64_t>(std::llround(std::exp(e * lt))));
  }
  g.back() = top;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::string centering_norm_name(CenteringNorm norm) {
  return norm == CenteringNorm::kPrinted ? "printed" : "scaled";
}

CenteringSup centering_sup(std::span<const double> H, std::span<const std::uint64_t> grid,
                           CenteringNorm norm) {
  CenteringSup s;
  s.points = grid.size();
  auto phi = [&](std::uint64_t j) { return static_cast<double>(j) / H[j]; };
  for (std::uint64_t a : grid) {
    for (std::uint64_t b : grid) {
      const std::uint64_t c = a + b;
      if (c >= H.size()) throw PreconditionError("centering_sup: H table too short");
      const double lc = std::log(static_cast<double>(c));
      const double cc = static_cast<double>(c), m = static_cast<double>(std::min(a, b));
      const double diff = std::abs(phi(c) - phi(a) - phi(b));
      const double v = norm == CenteringNorm::kPrinted ? diff * std::sqrt(cc) * lc * lc / std::sqrt(m)
                                                       : diff * lc * lc / std::sqrt(cc * m);
      if (v > s.value) {
        s.value = v;
        s.arg_a = a;
        s.arg_b = b;
      }
    }
  }
  return s;
}

CenteringStudy centering_study(std::span<const double> H, std::size_t points, std::uint64_t top,
                               CenteringNorm norm) {
  CenteringStudy st;
  st.norm = norm;
  st.coarse = centering_sup(H, log_grid(points, top), norm);
  st.refined = centering_sup(H, log_grid(2 * points - 1, top), norm);
  st.finite = std::isfinite(st.coarse.value) && std::isfinite(st.refined.value);
  st.relative_change = std::abs(st.refined.value - st.coarse.value) / st.coarse.value;
  st.stable = st.finite && st.relative_change <= 0.05;
  return st;
}

}  // namespace rangelab
