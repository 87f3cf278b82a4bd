// Acceptance run: one PASS/FAIL line per criterion, tolerances and runtime
// budgets as pinned below. Exit status 1 when any criterion fails.
//
//   acceptance [--only 1,4,12] [--workers N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "rangelab/deviations.hpp"
#include "rangelab/enumeration.hpp"
#include "rangelab/experiment.hpp"
#include "rangelab/kappa.hpp"
#include "rangelab/replicas.hpp"
#include "rangelab/return_probability.hpp"
#include "rangelab/return_table.hpp"
#include "rangelab/text_io.hpp"

namespace {

using namespace rangelab;
using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int g_workers = 4;
fs::path g_scratch;

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

RunResult run_twice(const json& config, const std::string& name) {
  const ExperimentConfig c = parse_config(config);
  RunOptions serial, parallel;
  serial.out = g_scratch / (name + "-w1");
  serial.workers = 1;
  parallel.out = g_scratch / (name + "-wN");
  parallel.workers = g_workers;
  const RunResult r = run_experiment(c, serial);
  run_experiment(c, parallel);
  return r;
}

// 1. Enumeration oracle.
Outcome enumeration_oracle() {
  double worst = 0.0;
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw()}) {
    const auto e = enumerate_paths(d, 9);
    const auto t = build_return_table(d, 9);
    for (std::size_t k = 0; k <= 9; ++k) worst = std::max(worst, std::abs(e.expected_range[k] - t.ER[k]));
  }
  const auto srw3 = enumerate_paths(StepDistribution::srw(), 3).expected_range_exact[3];
  const bool ok = worst <= 1e-12 && srw3 == "11/4";
  return {ok, "max |ER_table - ER_enum| = " + fmt("%.2e", worst) + " (tol 1e-12), E R_3(SRW) = " + srw3};
}

// 2. Quadrature vs convolution.
Outcome dual_method() {
  double worst = 0.0;
  for (const auto& d : {StepDistribution::srw(), StepDistribution::lazy_srw(), StepDistribution::king()}) {
    const auto dp = return_probs_dp(d, 200);
    const auto q = return_probs(d, 200);
    for (std::size_t k = 0; k <= 200; ++k) {
      worst = std::max(worst, std::abs(q[k] - dp[k]));
      worst = std::max(worst, std::abs(return_prob_exact(d, k) - dp[k]));
    }
  }
  return {worst <= 1e-10, "max |u_quad - u_dp| over k <= 200, 3 walks = " + fmt("%.2e", worst) + " (tol 1e-10)"};
}

// 3. Local CLT on the lazy walk.
Outcome local_clt() {
  const auto d = StepDistribution::lazy_srw();
  const auto t = build_return_table(d, 4000);
  const auto a = local_clt_check(d, t, 500), b = local_clt_check(d, t, 2000), c = local_clt_check(d, t, 4000);
  const bool ok = b.deviation < 0.02 && c.deviation < a.deviation;
  return {ok, "n P(S_n=0) vs 2/pi: dev(500) = " + fmt("%.4e", a.deviation) + ", dev(2000) = " +
                  fmt("%.4e", b.deviation) + " (< 0.02), dev(4000) = " + fmt("%.4e", c.deviation)};
}

// 4. Exact identities, via the experiment runner (also feeds criterion 12).
Outcome exact_identities() {
  const json cfg = {{"kind", "identities"},
                    {"distribution", "srw"},
                    {"replicas", 1000},
                    {"shard_size", 250},
                    {"seed", 20240601},
                    {"params", {{"n", 1024}, {"t", 256.0}, {"b", 4.0}, {"eps", 0.5}, {"q_tolerance", 1e-10}}}};
  const RunResult r = run_twice(cfg, "identities");
  const json s = json::parse(read_file(r.dir / "report" / "summary.json"));
  const auto dy = s["dyadic_violations"].get<std::uint64_t>(), bi = s["binary_violations"].get<std::uint64_t>(),
             q = s["q_identity_violations"].get<std::uint64_t>();
  const bool ok = r.complete && s["paths"] == 1000 && dy == 0 && bi == 0 && q == 0;
  return {ok, "1000 paths n = 2^10, 1000 pairs t = 256: violations dyadic " + std::to_string(dy) + ", binary " +
                  std::to_string(bi) + ", q-kernel " + std::to_string(q) + " (max q residual " +
                  fmt("%.2e", s["max_q_residual"].get<double>()) + ")"};
}

// 5. Parseval on 100 pairs.
Outcome parseval() {
  const json cfg = {{"kind", "smoothed"},
                    {"replicas", 100},
                    {"seed", 7},
                    {"params", {{"t", 256.0}, {"b", 4.0}, {"eps", {0.5}}, {"max_j", 0}}}};
  RunOptions o;
  o.out = g_scratch / "parseval";
  const RunResult r = run_experiment(parse_config(cfg), o);
  const json s = json::parse(read_file(r.dir / "report" / "summary.json"));
  const double worst = s["max_parseval_residual"].get<double>();
  const bool ok = r.complete && s["records"] == 100 && worst <= 1e-8;
  return {ok, "max relative residual over 100 pairs = " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

// 6. Expected-range asymptotics for the simple walk.
Outcome range_asymptotics() {
  const auto d = StepDistribution::srw();
  const auto t = build_return_table(d, 1 << 16);
  const auto lo = expected_range_asymptotic(t, 1 << 10), hi = expected_range_asymptotic(t, 1 << 16);
  const double unit = 1.0 / d.two_pi_sqrt_det();
  const double scaled = hi.scaled_residual / unit;
  const bool ok = hi.ratio > 1.0 && hi.ratio < 1.2 && std::abs(hi.ratio - 1.0) < std::abs(lo.ratio - 1.0) &&
                  scaled >= 0.5 && scaled <= 2.0;
  return {ok, "ER/(n/H): 2^10 -> " + fmt("%.6f", lo.ratio) + ", 2^16 -> " + fmt("%.6f", hi.ratio) +
                  "; (ER - n/H) H^2/n at 2^16 = " + fmt("%.4f", scaled) + " x 1/(2 pi sqrt det)"};
}

// 7. Monte Carlo mean vs exact mean (runner output; also feeds criterion 12).
Outcome monte_carlo() {
  const json cfg = {{"kind", "deviations"},
                    {"replicas", 100000},
                    {"shard_size", 10000},
                    {"seed", 31337},
                    {"params", {{"ns", {100, 1000, 10000}}, {"bs", {2.0, 3.0, 4.0}}, {"bootstrap", 200}}}};
  const RunResult r = run_twice(cfg, "montecarlo");
  std::map<std::size_t, std::vector<double>> centered;
  for (const auto& e : fs::directory_iterator(r.dir / "shards")) {
    std::ifstream in(e.path());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      const json j = json::parse(line);
      centered[j["n"].get<std::size_t>()].push_back(j["centered"].get<double>());
    }
  }
  bool ok = r.complete;
  std::string detail;
  for (std::size_t n : {100, 1000, 10000}) {
    const auto& x = centered[n];
    if (x.size() != 100000) ok = false;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    const double z = mean / se;
    if (!(std::abs(z) <= 4.0)) ok = false;
    detail += "n=" + std::to_string(n) + ": z = " + fmt("%+.2f", z) + "  ";
  }
  return {ok, detail + "(|z| <= 4, 1e5 replicas)"};
}

// 8. Tail asymmetry.
Outcome tail_asymmetry_check() {
  const auto d = StepDistribution::srw();
  const auto table = build_return_table(d, 4096);
  ReplicaRequest req;
  req.checkpoints = {4096};
  const ReplicaBatch b = simulate_ranges(d, req, 8, 0, 200000, Execution::kParallel);
  std::vector<double> x(b.range.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = b.range[i] - table.ER[4096];
  const AsymmetryReport a = tail_asymmetry(4096, x);
  const bool ok = a.moments.skewness > 0.0 && a.upper_count > a.lower_count;
  return {ok, "2e5 SRW replicas n = 4096: skewness = " + fmt("%+.4f", a.moments.skewness) + " (need > 0), P(R > 2sd) = " +
                  fmt("%.5f", a.upper_count / 2e5) + " vs P(-R > 2sd) = " + fmt("%.5f", a.lower_count / 2e5) +
                  " (need upper > lower)"};
}

// 9. Exponential-moment flatness.
Outcome moment_flatness() {
  const auto d = StepDistribution::srw();
  const auto table = build_return_table(d, 1 << 14);
  MomentProbe p;
  p.mode = MomentMode::kSignedRange;
  p.theta = 1.0;
  for (int e = 8; e <= 14; ++e) p.ns.push_back(std::size_t{1} << e);
  p.replicas = 10000;
  p.resamples = 200;
  p.seed = 9;
  const MomentCurve c = exp_moment_probe(d, table, p);
  std::string means;
  for (const auto& pt : c.points) means += fmt("%.3g", pt.mean) + " ";
  const bool ok = c.max_min_ratio < 3.0 && !c.monotone_growth;
  return {ok, "E exp((log n)^2/n R), n = 2^8..2^14: " + means + "; max/min = " + fmt("%.3f", c.max_min_ratio) +
                  " (need < 3), strictly increasing = " + (c.monotone_growth ? "yes" : "no") +
                  " (need no), Kendall tau = " + fmt("%.2f", c.kendall_tau)};
}

// 10. kappa(2,2) solver.
Outcome kappa_solver() {
  const std::vector<std::size_t> nodes{256, 512, 1024};
  const RefinementStudy st = kappa22_refinement(nodes);
  const GnAuditResult audit = gn_audit(st.m_hat, st.runs.back().state, 100, 10);
  const double gauss = gaussian_weinstein() / 2.0;
  const bool ok = st.stable && gauss <= st.m_hat && audit.violations == 0 && audit.trials == 100;
  return {ok, "M = " + fmt("%.7f", st.m_hat) + ", refinement changes " + fmt("%.2e", st.relative_changes[0]) + ", " +
                  fmt("%.2e", st.relative_changes[1]) + " (tol 1e-3); Gaussian " + fmt("%.5f", gauss) +
                  " <= M; GN audit violations " + std::to_string(audit.violations) + "/100"};
}

// 11. Centering regularity on a 50 x 50 grid up to 2^18.
Outcome centering() {
  const auto t = build_return_table(StepDistribution::srw(), std::size_t{1} << 19);
  const std::vector<double> H(t.H.begin(), t.H.end());
  const CenteringStudy scaled = centering_study(H, 50, std::uint64_t{1} << 18, CenteringNorm::kScaled);
  const CenteringStudy printed = centering_study(H, 50, std::uint64_t{1} << 18, CenteringNorm::kPrinted);
  const bool ok = scaled.finite && scaled.stable;
  return {ok, "sup |phi(A+B)-phi(A)-phi(B)| log^2 C / sqrt(C (A^B)) = " + fmt("%.4f", scaled.refined.value) +
                  ", change under 2x refinement " + fmt("%.2e", scaled.relative_change) +
                  " (tol 5%); literal C^{1/2} form = " + fmt("%.4g", printed.refined.value) + " at the grid corner"};
}

// 12. Determinism across worker counts (criteria 4 and 7 reruns).
Outcome determinism() {
  std::string detail;
  bool ok = true;
  for (const std::string name : {"identities", "montecarlo"}) {
    const fs::path a = g_scratch / (name + "-w1"), b = g_scratch / (name + "-wN");
    if (!fs::exists(a) || !fs::exists(b)) {
      ok = false;
      detail += name + ": run missing (criteria 4 and 7 must run first)  ";
      continue;
    }
    const auto sa = snapshot(a), sb = snapshot(b);
    const bool same = sa == sb;
    ok = ok && same;
    detail += name + ": " + std::to_string(sa.size()) + " files " + (same ? "byte-identical" : "DIFFER") +
              " (1 vs " + std::to_string(g_workers) + " workers)  ";
  }
  return {ok, detail};
}

std::set<int> parse_only(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = parse_only(argv[++i]);
    else if (a == "--workers" && i + 1 < argc) g_workers = std::stoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: acceptance [--only 1,2,...] [--workers N]\n");
      return 2;
    }
  }
  g_scratch = fs::temp_directory_path() / ("rangelab-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(g_scratch);

  const std::vector<Criterion> criteria = {
      {1, "enumeration oracle", 10, enumeration_oracle},
      {2, "dual-method return probabilities", 30, dual_method},
      {3, "local CLT", 60, local_clt},
      {4, "exact identities", 120, exact_identities},
      {5, "Parseval identity", 120, parseval},
      {6, "expected-range asymptotics", 60, range_asymptotics},
      {7, "Monte Carlo consistency", 300, monte_carlo},
      {8, "tail asymmetry", 600, tail_asymmetry_check},
      {9, "exponential-moment flatness", 600, moment_flatness},
      {10, "kappa(2,2) solver", 120, kappa_solver},
      {11, "centering regularity", 60, centering},
      {12, "determinism", 1e9, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] criterion %2d %-34s %s | %.1f s%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str(), secs, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  fs::remove_all(g_scratch);
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
