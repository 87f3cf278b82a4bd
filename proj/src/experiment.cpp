#include "rangelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rangelab/constants.hpp"
#include "rangelab/deviations.hpp"
#include "rangelab/distribution_io.hpp"
#include "rangelab/enumeration.hpp"
#include "rangelab/error.hpp"
#include "rangelab/execution.hpp"
#include "rangelab/kappa.hpp"
#include "rangelab/range_stats.hpp"
#include "rangelab/replicas.hpp"
#include "rangelab/return_table.hpp"
#include "rangelab/smoothed.hpp"
#include "rangelab/statistics.hpp"
#include "rangelab/text_io.hpp"
#include "rangelab/walk.hpp"

namespace rangelab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- config

const std::map<std::string, ExperimentKind> kKinds = {
    {"exact", ExperimentKind::kExact},           {"identities", ExperimentKind::kIdentities},
    {"smoothed", ExperimentKind::kSmoothed},     {"deviations", ExperimentKind::kDeviations},
    {"lil", ExperimentKind::kLil},               {"kappa", ExperimentKind::kKappa},
};

bool sharded(ExperimentKind k) {
  return k != ExperimentKind::kExact && k != ExperimentKind::kKappa;
}

json default_params(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kExact:
      return {{"n", 4096}, {"enumerate_n", 9}, {"ladder", json::array()}, {"local_clt", {500, 2000, 4000}}};
    case ExperimentKind::kIdentities:
      return {{"n", 1024},  {"levels", -1},      {"t", 256.0},          {"b", 4.0},
              {"eps", 0.5}, {"kernel", "cubic"}, {"q_tolerance", 1e-10}, {"parseval_tolerance", 1e-8}};
    case ExperimentKind::kSmoothed:
      return {{"t", 256.0}, {"b", 4.0}, {"eps", {0.5, 1.0, 2.0}}, {"max_j", 2}, {"kernel", "cubic"}};
    case ExperimentKind::kDeviations:
      return {{"ns", {4096}},
              {"bs", {8.0}},
              {"thetas", {0.25, 0.5, 1.0}},
              {"lambdas", {0.5, 1.0, 2.0}},
              {"self_intersections", false},
              {"p", 0},
              {"moment_theta", 1.0},
              {"bootstrap", 1000}};
    case ExperimentKind::kLil:
      return {{"ns", {16, 64, 256, 1024, 4096, 16384, 65536}}, {"lambdas", {0.5, 1.0, 2.0, 4.0}}};
    case ExperimentKind::kKappa:
      return {{"nodes", {256, 512, 1024}}, {"radius", 32.0}, {"grading", 3.0}, {"audit_trials", 100}};
  }
  return json::object();
}

std::size_t default_replicas(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kIdentities:
      return 1000;
    case ExperimentKind::kSmoothed:
      return 100;
    case ExperimentKind::kDeviations:
      return 10000;
    case ExperimentKind::kLil:
      return 64;
    default:
      return 0;
  }
}

template <class T>
T param(const json& p, const char* key) {
  try {
    return p.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parameter '") + key + "': " + e.what());
  }
}

std::vector<std::size_t> size_list(const json& p, const char* key) {
  auto v = param<std::vector<long long>>(p, key);
  std::vector<std::size_t> out;
  for (long long x : v) {
    if (x <= 0) throw ConfigError(std::string("parameter '") + key + "' must hold positive integers");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

void require_increasing(const std::vector<std::size_t>& v, const char* key) {
  if (v.empty()) throw ConfigError(std::string("parameter '") + key + "' is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) throw ConfigError(std::string("parameter '") + key + "' must be increasing");
}

void validate_params(const ExperimentConfig& c) {
  const json& p = c.params;
  switch (c.kind) {
    case ExperimentKind::kExact: {
      if (param<long long>(p, "n") < 1) throw ConfigError("exact: n must be positive");
      if (param<long long>(p, "enumerate_n") < 0) throw ConfigError("exact: enumerate_n must be >= 0");
      size_list(p, "local_clt");
      size_list(p, "ladder");
      break;
    }
    case ExperimentKind::kIdentities: {
      if (param<long long>(p, "n") < 2) throw ConfigError("identities: n must be at least 2");
      SmoothingKernel::from_name(param<std::string>(p, "kernel"));
      kernel_stamp(param<double>(p, "t"), param<double>(p, "b"), param<double>(p, "eps"),
                   SmoothingKernel::from_name(param<std::string>(p, "kernel")));
      break;
    }
    case ExperimentKind::kSmoothed: {
      const auto kernel = SmoothingKernel::from_name(param<std::string>(p, "kernel"));
      for (double eps : param<std::vector<double>>(p, "eps"))
        kernel_stamp(param<double>(p, "t"), param<double>(p, "b"), eps, kernel);
      if (param<int>(p, "max_j") < 0) throw ConfigError("smoothed: max_j must be >= 0");
      break;
    }
    case ExperimentKind::kDeviations: {
      const auto ns = size_list(p, "ns");
      check_schedule(ns, param<std::vector<double>>(p, "bs"));
      if (c.replicas < 10000) throw ConfigError("deviations: at least 10^4 replicas are required");
      const int pp = param<int>(p, "p");
      if (pp == 1 || pp < 0) throw ConfigError("deviations: p must be 0 (off) or >= 2");
      if (param<int>(p, "bootstrap") < 2) throw ConfigError("deviations: bootstrap must be >= 2");
      break;
    }
    case ExperimentKind::kLil: {
      require_increasing(size_list(p, "ns"), "ns");
      param<std::vector<double>>(p, "lambdas");
      break;
    }
    case ExperimentKind::kKappa: {
      const auto nodes = size_list(p, "nodes");
      for (auto n : nodes)
        if (n < 256) throw ConfigError("kappa: grids need at least 256 nodes");
      if (param<double>(p, "radius") < 10.0) throw ConfigError("kappa: outer radius must be >= 10");
      break;
    }
  }
}

// ---------------------------------------------------------------- helpers

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Execution exec_for(const ExperimentConfig& c) {
  return c.workers == 1 ? Execution::kSerial : Execution::kParallel;
}

/// Runs body(i) for i in [0, count), in parallel unless exec is serial.
/// The first exception is rethrown after the loop.
template <class Body>
void replica_loop(std::size_t count, Execution exec, Body body) {
  std::exception_ptr error;
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical(rangelab_replica_error)
        if (!error) error = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
  if (error) std::rethrow_exception(error);
}

std::string csv_header(const std::string& hash, const std::string& columns) {
  return "# rangelab " + std::string(kToolVersion) + " config_hash=" + hash + "\n" + columns + "\n";
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::size_t max_of(const std::vector<std::size_t>& v) { return *std::max_element(v.begin(), v.end()); }

struct Plot {
  std::string name;
  std::string body;
  void add(double x, double y, double lo, double hi) {
    body += num(x) + "," + num(y) + "," + num(lo) + "," + num(hi) + "\n";
  }
};

// ---------------------------------------------------------------- shard records

struct ShardContext {
  const ExperimentConfig* config = nullptr;
  const ReturnProbTable* table = nullptr;
};

std::vector<std::string> identity_records(const ExperimentConfig& c, std::size_t lo, std::size_t hi) {
  const json& p = c.params;
  const auto n = param<std::size_t>(p, "n");
  const int levels = param<int>(p, "levels");
  const double t = param<double>(p, "t"), b = param<double>(p, "b");
  const auto kernel = SmoothingKernel::from_name(param<std::string>(p, "kernel"));
  const KernelStamp stamp = kernel_stamp(t, b, param<double>(p, "eps"), kernel);
  const QKernel q = q_kernel(stamp);
  const double q_tol = param<double>(p, "q_tolerance");
  const double par_tol = param<double>(p, "parseval_tolerance");
  std::vector<std::string> out(hi - lo);
  replica_loop(hi - lo, exec_for(c), [&](std::size_t i) {
    const std::uint64_t r = lo + i;
    const SeedId seed{c.seed, r};
    const auto path = sample_path(c.dist, n, seed).positions;
    const DecompositionRecord rec = decomposition_check(path, levels);
    const auto z = sample_poissonized(c.dist, t, seed, 1);
    const auto z2 = sample_poissonized(c.dist, t, seed, 2);
    const auto r1 = poisson_range(z, t), r2 = poisson_range(z2, t);
    const double b0 = b_functional(r1, r2, stamp);
    const double qw = q_weighted_intersection(q, r1, r2);
    const double q_res = std::abs(b0 - qw) / std::max(1.0, std::abs(b0));
    const ParsevalResult par = parseval_check(r1, r2, stamp, t / b);
    json j = {{"replica", r},
              {"seed", {c.seed, r}},
              {"n", n},
              {"R_n", rec.range},
              {"dyadic", rec.dyadic},
              {"levels", rec.levels},
              {"dyadic_rhs", rec.dyadic_rhs},
              {"binary_exponents", rec.binary_exponents},
              {"binary_rhs", rec.binary_rhs},
              {"dyadic_ok", rec.dyadic_holds()},
              {"binary_ok", rec.binary_holds()},
              {"B0", b0},
              {"q_weighted", qw},
              {"q_residual", q_res},
              {"q_ok", q_res <= q_tol},
              {"parseval_lattice", par.lattice_side},
              {"parseval_fourier", par.fourier_side},
              {"parseval_residual", par.residual},
              {"parseval_ok", par.residual <= par_tol}};
    out[i] = j.dump();
  });
  return out;
}

std::vector<std::string> smoothed_records(const ExperimentConfig& c, std::size_t lo, std::size_t hi) {
  const json& p = c.params;
  const double t = param<double>(p, "t"), b = param<double>(p, "b");
  const int max_j = param<int>(p, "max_j");
  const auto kernel = SmoothingKernel::from_name(param<std::string>(p, "kernel"));
  const auto eps_list = param<std::vector<double>>(p, "eps");
  std::vector<KernelStamp> stamps;
  std::vector<QKernel> qs;
  for (double eps : eps_list) {
    stamps.push_back(kernel_stamp(t, b, eps, kernel));
    qs.push_back(q_kernel(stamps.back()));
  }
  std::vector<std::string> out(hi - lo);
  replica_loop(hi - lo, exec_for(c), [&](std::size_t i) {
    const std::uint64_t r = lo + i;
    const SeedId seed{c.seed, r};
    const auto z = sample_poissonized(c.dist, t, seed, 1);
    const auto z2 = sample_poissonized(c.dist, t, seed, 2);
    const auto r1 = poisson_range(z, t), r2 = poisson_range(z2, t);
    std::string lines;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const KernelStamp& st = stamps[e];
      std::vector<double> bvals;
      for (int j = 0; j <= max_j; ++j) bvals.push_back(b_functional(z, z2, t, j, st));
      double origin = 0.0;
      for (Point y : r1)
        if (std::abs(y.x) <= st.reach && std::abs(y.y) <= st.reach) origin += st.at(-y.x, -y.y);
      const ParsevalResult par = parseval_check(r1, r2, st, t / b);
      json j = {{"replica", r},
                {"seed", {c.seed, r}},
                {"t", t},
                {"b", b},
                {"eps", eps_list[e]},
                {"lambda", st.lambda},
                {"range", r1.size()},
                {"A", a_functional(r1, st)},
                {"A_dft", a_functional_dft(r1, st)},
                {"B", bvals},
                {"q_mass", qs[e].total()},
                {"q_weighted", q_weighted_intersection(qs[e], r1, r2)},
                {"parseval_residual", par.residual},
                {"origin_density", origin / st.lambda}};
      lines += j.dump();
      if (e + 1 < eps_list.size()) lines += "\n";
    }
    out[i] = lines;
  });
  return out;
}

std::vector<std::string> deviation_records(const ExperimentConfig& c, const ReturnProbTable& table,
                                           std::size_t lo, std::size_t hi) {
  const json& p = c.params;
  const auto ns = size_list(p, "ns");
  const bool with_l = param<bool>(p, "self_intersections");
  const int pp = param<int>(p, "p");
  ReplicaRequest req;
  req.checkpoints = ns;
  req.self_intersections = with_l;
  const ReplicaBatch batch = simulate_ranges(c.dist, req, c.seed, lo, hi - lo, exec_for(c));
  IntersectionBatch inter;
  if (pp >= 2)
    inter = simulate_intersections(c.dist, static_cast<std::size_t>(pp), ns, c.seed, lo, hi - lo, exec_for(c));
  std::vector<std::string> out(hi - lo);
  for (std::size_t i = 0; i < hi - lo; ++i) {
    std::string lines;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const auto R = batch.range[batch.at(i, k)];
      json j = {{"replica", lo + i},
                {"seed", {c.seed, lo + i}},
                {"n", ns[k]},
                {"R_n", R},
                {"centered", static_cast<double>(R) - table.ER[ns[k]]}};
      if (with_l) j["L_n"] = batch.self_intersections[batch.at(i, k)];
      if (pp >= 2) j["J_n"] = inter.intersections[i * ns.size() + k];
      lines += j.dump();
      if (k + 1 < ns.size()) lines += "\n";
    }
    out[i] = lines;
  }
  return out;
}

std::vector<std::string> lil_records(const ExperimentConfig& c, const ReturnProbTable& table, std::size_t lo,
                                     std::size_t hi) {
  const auto ns = size_list(c.params, "ns");
  ReplicaRequest req;
  req.checkpoints = ns;
  req.expected_range = table.ER;
  const ReplicaBatch batch = simulate_ranges(c.dist, req, c.seed, lo, hi - lo, exec_for(c));
  std::vector<std::string> out(hi - lo);
  for (std::size_t i = 0; i < hi - lo; ++i) {
    std::vector<double> centered, maxc;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      centered.push_back(static_cast<double>(batch.range[batch.at(i, k)]) - table.ER[ns[k]]);
      maxc.push_back(batch.max_centered[batch.at(i, k)]);
    }
    json j = {{"replica", lo + i}, {"seed", {c.seed, lo + i}}, {"n", ns}, {"centered", centered},
              {"max_centered", maxc}};
    out[i] = j.dump();
  }
  return out;
}

std::size_t table_length(const ExperimentConfig& c) {
  if (c.kind == ExperimentKind::kDeviations || c.kind == ExperimentKind::kLil)
    return max_of(size_list(c.params, "ns"));
  return 0;
}

// ---------------------------------------------------------------- manifest

struct Manifest {
  json data;
  fs::path file;

  std::set<std::size_t> completed() const {
    std::set<std::size_t> s;
    for (const auto& v : data.value("completed", json::array())) s.insert(v.get<std::size_t>());
    return s;
  }
  void save() const { write_file_atomic(file, data.dump(2) + "\n"); }
};

json shard_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kIdentities:
      return {"replica", "seed", "n", "R_n", "dyadic", "levels", "dyadic_rhs", "binary_exponents", "binary_rhs",
              "dyadic_ok", "binary_ok", "B0", "q_weighted", "q_residual", "q_ok", "parseval_lattice",
              "parseval_fourier", "parseval_residual", "parseval_ok"};
    case ExperimentKind::kSmoothed:
      return {"replica", "seed", "t", "b", "eps", "lambda", "range", "A", "A_dft", "B", "q_mass", "q_weighted",
              "parseval_residual", "origin_density"};
    case ExperimentKind::kDeviations:
      return {"replica", "seed", "n", "R_n", "centered", "L_n?", "J_n?"};
    case ExperimentKind::kLil:
      return {"replica", "seed", "n", "centered", "max_centered"};
    default:
      return json::array();
  }
}

fs::path shard_file(const fs::path& dir, std::size_t k) {
  char name[32];
  std::snprintf(name, sizeof name, "shard-%05zu.jsonl", k);
  return dir / "shards" / name;
}

// ---------------------------------------------------------------- reports

struct Writer {
  fs::path dir;
  std::string hash;
  ReportResult* result;

  void csv(const std::string& name, const std::string& columns, const std::string& body) {
    const fs::path f = dir / name;
    write_file_atomic(f, csv_header(hash, columns) + body);
    result->files.push_back(f);
  }
  void plot(const Plot& p) { csv("plot-" + p.name + ".csv", "x,y,ci_lo,ci_hi", p.body); }
  void json_file(const std::string& name, const json& j) {
    const fs::path f = dir / name;
    write_file_atomic(f, j.dump(2) + "\n");
    result->files.push_back(f);
  }
};

json load_records(const fs::path& run, const ExperimentConfig& c, std::size_t shards, ReportResult& res) {
  json records = json::array();
  for (std::size_t k = 0; k < shards; ++k) {
    const fs::path f = shard_file(run, k);
    if (!fs::exists(f)) {
      res.warnings.push_back("missing shard " + f.filename().string() + "; report is partial");
      continue;
    }
    const auto lines = read_lines(f);
    if (lines.empty()) {
      res.warnings.push_back("empty shard " + f.filename().string());
      continue;
    }
    const json header = json::parse(lines.front());
    if (header.value("config_hash", "") != c.hash_hex())
      throw ConfigError("shard " + f.string() + " belongs to a different config");
    for (std::size_t i = 1; i < lines.size(); ++i) records.push_back(json::parse(lines[i]));
  }
  return records;
}

void report_identities(const json& recs, const ExperimentConfig& c, Writer& w, ReportResult& res) {
  std::string body;
  std::uint64_t dyadic = 0, binary = 0, qv = 0, pv = 0;
  double max_q = 0.0, max_p = 0.0;
  for (const auto& r : recs) {
    const bool ok = r["dyadic_ok"].get<bool>() && r["binary_ok"].get<bool>() && r["q_ok"].get<bool>() &&
                    r["parseval_ok"].get<bool>();
    dyadic += r["dyadic_ok"].get<bool>() ? 0 : 1;
    binary += r["binary_ok"].get<bool>() ? 0 : 1;
    qv += r["q_ok"].get<bool>() ? 0 : 1;
    pv += r["parseval_ok"].get<bool>() ? 0 : 1;
    max_q = std::max(max_q, r["q_residual"].get<double>());
    max_p = std::max(max_p, r["parseval_residual"].get<double>());
    body += std::to_string(r["replica"].get<std::uint64_t>()) + "," + std::to_string(r["n"].get<std::size_t>()) +
            "," + std::to_string(r["R_n"].get<std::uint64_t>()) + "," +
            std::to_string(r["dyadic_rhs"].get<std::int64_t>()) + "," +
            std::to_string(r["binary_rhs"].get<std::int64_t>()) + "," + num(r["B0"].get<double>()) + "," +
            num(r["q_weighted"].get<double>()) + "," + num(r["q_residual"].get<double>()) + "," +
            num(r["parseval_residual"].get<double>()) + "," + (ok ? "1" : "0") + "\n";
  }
  w.csv("identities.csv",
        "replica,n,R_n,dyadic_rhs,binary_rhs,B0,q_weighted,q_residual,parseval_residual,ok", body);
  res.identity_violations = dyadic + binary + qv + pv;
  w.json_file("summary.json", {{"kind", "identities"},
                               {"config_hash", c.hash_hex()},
                               {"paths", recs.size()},
                               {"dyadic_violations", dyadic},
                               {"binary_violations", binary},
                               {"q_identity_violations", qv},
                               {"parseval_violations", pv},
                               {"max_q_residual", max_q},
                               {"max_parseval_residual", max_p},
                               {"warnings", res.warnings}});
}

void report_smoothed(const json& recs, const ExperimentConfig& c, Writer& w, ReportResult& res) {
  std::string body;
  std::map<double, std::vector<double>> a_by_eps, density_by_eps;
  double max_dft = 0.0, max_par = 0.0, max_q = 0.0;
  for (const auto& r : recs) {
    const double a = r["A"].get<double>(), ad = r["A_dft"].get<double>();
    max_dft = std::max(max_dft, std::abs(a - ad) / std::max(std::abs(a), 1e-300));
    max_par = std::max(max_par, r["parseval_residual"].get<double>());
    max_q = std::max(max_q, std::abs(r["q_mass"].get<double>() - 1.0));
    const double eps = r["eps"].get<double>();
    a_by_eps[eps].push_back(a);
    density_by_eps[eps].push_back(r["origin_density"].get<double>());
    std::string bs;
    for (const auto& v : r["B"]) bs += (bs.empty() ? "" : ";") + num(v.get<double>());
    body += std::to_string(r["replica"].get<std::uint64_t>()) + "," + num(eps) + "," +
            num(r["lambda"].get<double>()) + "," + num(a) + "," + num(ad) + "," + bs + "," +
            num(r["q_weighted"].get<double>()) + "," + num(r["parseval_residual"].get<double>()) + "," +
            num(r["origin_density"].get<double>()) + "\n";
  }
  w.csv("smoothed.csv", "replica,eps,lambda,A,A_dft,B_levels,q_weighted,parseval_residual,origin_density", body);
  Plot pa{"A-vs-eps", ""}, pd{"origin-density-vs-eps", ""};
  for (const auto& [eps, v] : a_by_eps) {
    if (v.size() < 2) continue;
    const Moments m = moments(v);
    pa.add(eps, m.mean, m.mean - kZ95 * m.standard_error, m.mean + kZ95 * m.standard_error);
    const Moments md = moments(density_by_eps[eps]);
    pd.add(eps, md.mean, md.mean - kZ95 * md.standard_error, md.mean + kZ95 * md.standard_error);
  }
  w.plot(pa);
  w.plot(pd);
  w.json_file("summary.json", {{"kind", "smoothed"},
                               {"config_hash", c.hash_hex()},
                               {"records", recs.size()},
                               {"max_A_direct_vs_dft_relative", max_dft},
                               {"max_parseval_residual", max_par},
                               {"max_q_mass_error", max_q},
                               {"warnings", res.warnings}});
}

void report_deviations(const json& recs, const ExperimentConfig& c, const ReturnProbTable& table, Writer& w,
                       ReportResult& res) {
  const json& p = c.params;
  const auto ns = size_list(p, "ns");
  const auto bs = param<std::vector<double>>(p, "bs");
  const auto thetas = param<std::vector<double>>(p, "thetas");
  const auto lambdas = param<std::vector<double>>(p, "lambdas");
  const int pp = param<int>(p, "p");
  const double mtheta = param<double>(p, "moment_theta");
  const int resamples = param<int>(p, "bootstrap");
  const ScheduleFlags flags = check_schedule(ns, bs);
  for (const auto& wmsg : flags.warnings) res.warnings.push_back(wmsg);

  std::map<std::size_t, std::vector<double>> centered, inter;
  for (const auto& r : recs) {
    const auto n = r["n"].get<std::size_t>();
    centered[n].push_back(r["centered"].get<double>());
    if (r.contains("J_n")) inter[n].push_back(r["J_n"].get<double>());
  }
  std::string tails, asym;
  std::map<std::string, Plot> plots;
  json summary_points = json::array();
  std::vector<std::size_t> present;
  std::vector<std::vector<double>> signed_vals, inter_vals;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& x = centered[ns[i]];
    if (x.size() < 2) {
      res.warnings.push_back("no samples for n = " + std::to_string(ns[i]));
      continue;
    }
    if (x.size() < 10000) res.warnings.push_back("fewer than 10^4 replicas at n = " + std::to_string(ns[i]));
    present.push_back(ns[i]);
    signed_vals.push_back(x);
    if (pp >= 2) inter_vals.push_back(inter[ns[i]]);
    auto rows = upper_tail_rows(c.dist, table, ns[i], bs[i], thetas, x);
    const auto lower = lower_tail_rows(ns[i], bs[i], lambdas, x);
    rows.insert(rows.end(), lower.begin(), lower.end());
    for (const auto& row : rows) {
      tails += std::to_string(row.n) + "," + num(row.b) + "," + row.side + "," + row.variant + "," + num(row.level) +
               "," + num(row.threshold) + "," + std::to_string(row.exceedances) + "," +
               std::to_string(row.replicas) + "," + num(row.frequency) + "," + num(row.ci.lo) + "," +
               num(row.ci.hi) + "," + num(row.rate) + "," + num(row.rate_ci.lo) + "," + num(row.rate_ci.hi) + "," +
               num(row.rate_theta) + "," + (row.zero_count ? "1" : "0") + "," + (row.low_count ? "1" : "0") +
               "\n";
      char key[64];
      std::snprintf(key, sizeof key, "%s-%s-%g", row.side.c_str(), row.variant.c_str(), row.level);
      Plot& pl = plots[key];
      pl.name = std::string("rate-") + key;
      pl.add(static_cast<double>(row.n), row.rate, row.rate_ci.lo, row.rate_ci.hi);
    }
    const AsymmetryReport a = tail_asymmetry(ns[i], x);
    asym += std::to_string(a.n) + "," + std::to_string(a.replicas) + "," + num(a.moments.mean) + "," +
            num(a.moments.sd) + "," + num(a.moments.skewness) + "," + num(a.a) + "," +
            std::to_string(a.upper_count) + "," + std::to_string(a.lower_count) + "," + num(a.upper_ci.lo) + "," +
            num(a.upper_ci.hi) + "," + num(a.lower_ci.lo) + "," + num(a.lower_ci.hi) + "\n";
    summary_points.push_back({{"n", ns[i]},
                              {"replicas", x.size()},
                              {"skewness", a.moments.skewness},
                              {"upper_beyond_2sd", a.upper_count},
                              {"lower_beyond_2sd", a.lower_count}});
  }
  w.csv("tails.csv",
        "n,b,side,variant,level,threshold,exceedances,replicas,frequency,ci_lo,ci_hi,rate,rate_ci_lo,rate_ci_hi,"
        "rate_b_theta,zero_count,low_count",
        tails);
  w.csv("asymmetry.csv",
        "n,replicas,mean,sd,skewness,a,upper_count,lower_count,upper_ci_lo,upper_ci_hi,lower_ci_lo,lower_ci_hi",
        asym);
  for (const auto& [key, pl] : plots) w.plot(pl);

  std::string mom;
  json curves = json::array();
  auto add_curve = [&](const MomentCurve& curve) {
    Plot pl{"moment-" + moment_mode_name(curve.mode), ""};
    for (const auto& pt : curve.points) {
      mom += moment_mode_name(curve.mode) + "," + num(curve.theta) + "," + std::to_string(pt.n) + "," +
             std::to_string(pt.replicas) + "," + num(pt.mean) + "," + num(pt.log_mean) + "," +
             num(std::exp(pt.log_ci.lo)) + "," + num(std::exp(pt.log_ci.hi)) + "\n";
      pl.add(static_cast<double>(pt.n), pt.mean, std::exp(pt.log_ci.lo), std::exp(pt.log_ci.hi));
    }
    w.plot(pl);
    curves.push_back({{"mode", moment_mode_name(curve.mode)},
                      {"theta", curve.theta},
                      {"max_min_ratio", curve.max_min_ratio},
                      {"monotone_growth", curve.monotone_growth},
                      {"kendall_tau", curve.kendall_tau}});
  };
  if (!present.empty()) {
    add_curve(moment_curve(MomentMode::kSignedRange, mtheta, 2, present, signed_vals, resamples, c.seed));
    add_curve(moment_curve(MomentMode::kAbsRange, mtheta, 2, present, signed_vals, resamples, c.seed));
    if (pp >= 2)
      add_curve(moment_curve(MomentMode::kIntersection, mtheta, static_cast<std::size_t>(pp), present, inter_vals,
                             resamples, c.seed));
  }
  w.csv("moments.csv", "mode,theta,n,replicas,mean,log_mean,ci_lo,ci_hi", mom);
  w.json_file("summary.json", {{"kind", "deviations"},
                               {"config_hash", c.hash_hex()},
                               {"records", recs.size()},
                               {"upper_schedule_ok", flags.upper_ok},
                               {"lower_schedule_ok", flags.lower_ok},
                               {"upper_schedule_ratio", flags.upper_ratio},
                               {"lower_schedule_ratio", flags.lower_ratio},
                               {"points", summary_points},
                               {"moment_curves", curves},
                               {"warnings", res.warnings}});
}

void report_lil(const json& recs, const ExperimentConfig& c, const ReturnProbTable& table, Writer& w,
                ReportResult& res) {
  const auto ns = size_list(c.params, "ns");
  auto lambdas = param<std::vector<double>>(c.params, "lambdas");
  std::sort(lambdas.begin(), lambdas.end());
  // Reference constants: kappa from a 512-node solve, both identifications.
  KappaOptions ko;
  const KappaResult kr = kappa22_solve(ko);
  const ConstantsReport constants = constants_report(c.dist, kr.m_hat, 0.0);
  std::string refs = "upper_2pi_sqrt_det," + num(constants.two_pi_sqrt_det) + "\n";
  for (const auto& cand : constants.candidates)
    refs += "lower_theta_inverse[" + cand.identification + "]," + num(cand.theta_inverse) + "\n";
  w.csv("references.csv", "name,value", refs);

  std::vector<std::size_t> skipped, kept_idx;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (std::isnan(upper_lil_scale(ns[i])))
      skipped.push_back(ns[i]);
    else
      kept_idx.push_back(i);
  }
  if (!skipped.empty()) res.warnings.push_back("ladder points with n <= e^e skipped");
  std::string traj;
  std::vector<std::vector<double>> up_by_point(kept_idx.size()), low_by_point(kept_idx.size());
  std::vector<std::uint64_t> counts(lambdas.size(), 0);
  const std::size_t last = ns.size() - 1;
  const double last_scale = upper_lil_scale(ns[last]);
  for (const auto& r : recs) {
    const auto centered = r["centered"].get<std::vector<double>>();
    const auto maxc = r["max_centered"].get<std::vector<double>>();
    double up = -1e300, low = -1e300;
    for (std::size_t k = 0; k < kept_idx.size(); ++k) {
      const std::size_t i = kept_idx[k];
      up = std::max(up, centered[i] / upper_lil_scale(ns[i]));
      low = std::max(low, -centered[i] / lower_lil_scale(ns[i]));
      up_by_point[k].push_back(up);
      low_by_point[k].push_back(low);
      traj += std::to_string(r["replica"].get<std::uint64_t>()) + "," + std::to_string(ns[i]) + "," + num(up) +
              "," + num(low) + "\n";
    }
    if (!std::isnan(last_scale))
      for (std::size_t l = 0; l < lambdas.size(); ++l) counts[l] += maxc[last] > lambdas[l] * last_scale ? 1 : 0;
  }
  w.csv("trajectories.csv", "replica,n,upper_running_max,lower_running_max", traj);
  Plot pu{"lil-upper", ""}, pl{"lil-lower", ""};
  auto band = [](std::vector<double> v, Plot& p, double x) {
    std::sort(v.begin(), v.end());
    const auto q = [&](double f) { return v[static_cast<std::size_t>(std::floor(f * static_cast<double>(v.size() - 1)))]; };
    double mean = 0.0;
    for (double d : v) mean += d;
    p.add(x, mean / static_cast<double>(v.size()), q(0.025), q(0.975));
  };
  for (std::size_t k = 0; k < kept_idx.size() && !recs.empty(); ++k) {
    band(up_by_point[k], pu, static_cast<double>(ns[kept_idx[k]]));
    band(low_by_point[k], pl, static_cast<double>(ns[kept_idx[k]]));
  }
  w.plot(pu);
  w.plot(pl);
  std::string mx;
  bool nonincreasing = true;
  for (std::size_t l = 0; l < lambdas.size() && !recs.empty(); ++l) {
    const Interval ci = wilson_interval(counts[l], recs.size());
    mx += num(lambdas[l]) + "," + std::to_string(counts[l]) + "," + std::to_string(recs.size()) + "," +
          num(static_cast<double>(counts[l]) / static_cast<double>(recs.size())) + "," + num(ci.lo) + "," +
          num(ci.hi) + "\n";
    if (l > 0 && counts[l] > counts[l - 1]) nonincreasing = false;
  }
  w.csv("running-max-exceedance.csv", "lambda,exceedances,replicas,frequency,ci_lo,ci_hi", mx);

  // Centering regularity from the exact H table.
  std::vector<double> H(table.H.begin(), table.H.end());
  json centering = json::array();
  const std::uint64_t top = std::uint64_t{1} << static_cast<int>(std::floor(std::log2(static_cast<double>(table.n) / 2.0)));
  if (top >= 2) {
    for (auto norm : {CenteringNorm::kPrinted, CenteringNorm::kScaled}) {
      const CenteringStudy st = centering_study(H, 50, top, norm);
      centering.push_back({{"normalization", centering_norm_name(norm)},
                           {"grid_top", top},
                           {"coarse_sup", st.coarse.value},
                           {"coarse_arg", {st.coarse.arg_a, st.coarse.arg_b}},
                           {"refined_sup", st.refined.value},
                           {"refined_arg", {st.refined.arg_a, st.refined.arg_b}},
                           {"relative_change", st.relative_change},
                           {"stable", st.stable}});
    }
  }
  w.json_file("summary.json", {{"kind", "lil"},
                               {"config_hash", c.hash_hex()},
                               {"trajectories", recs.size()},
                               {"skipped_n", skipped},
                               {"note", "non-conclusive at desk scale: LIL limits are asymptotic in n"},
                               {"upper_reference", constants.two_pi_sqrt_det},
                               {"running_max_exceedance_nonincreasing", nonincreasing},
                               {"centering", centering},
                               {"warnings", res.warnings}});
}

// ---------------------------------------------------------------- unsharded kinds

void run_exact(const ExperimentConfig& c, const fs::path& dir, bool enumerate, ReportResult& res) {
  const json& p = c.params;
  const auto n = param<std::size_t>(p, "n");
  Writer w{dir / "report", c.hash_hex(), &res};
  const ReturnProbTable table = build_return_table(c.dist, n, {exec_for(c)});
  std::vector<double> er_enum;
  if (enumerate) {
    const auto m = std::min<std::size_t>(n, param<std::size_t>(p, "enumerate_n"));
    er_enum = enumerate_paths(c.dist, m).expected_range;
  }
  std::string body;
  for (std::size_t k = 0; k <= n; ++k) {
    body += std::to_string(k) + "," + num(table.u[k]) + "," + num(table.H[k]) + "," + num(table.r[k]) + "," +
            num(table.f[k]) + "," + num(table.ER[k]);
    if (enumerate) body += "," + (k < er_enum.size() ? num(er_enum[k]) : std::string());
    body += "\n";
  }
  w.csv("returns.csv", enumerate ? "k,u,H,r,f,ER,ER_enum" : "k,u,H,r,f,ER", body);

  auto ladder = size_list(p, "ladder");
  if (ladder.empty())
    for (std::size_t m = 16; m <= n; m *= 2) ladder.push_back(m);
  std::string asym;
  for (std::size_t m : ladder) {
    if (m > n) continue;
    const RangeAsymptotics a = expected_range_asymptotic(table, m);
    asym += std::to_string(m) + "," + num(a.exact_er) + "," + num(a.leading) + "," + num(a.second_order) + "," +
            num(a.ratio) + "," + num(a.scaled_residual) + "," + num(table.H[m]) + "," + num(a.h_asymptotic) + "\n";
  }
  w.csv("asymptotics.csv", "n,ER,leading,second_order,ratio,scaled_residual,H,H_asymptotic", asym);

  std::string clt;
  if (c.dist.strongly_aperiodic()) {
    for (std::size_t m : size_list(p, "local_clt")) {
      if (m > n) continue;
      const LocalCltReport l = local_clt_check(c.dist, table, m);
      clt += std::to_string(m) + "," + num(l.scaled_return) + "," + num(l.limit) + "," + num(l.deviation) + "\n";
    }
  } else {
    res.warnings.push_back("local CLT check skipped: walk is not strongly aperiodic");
  }
  w.csv("local_clt.csv", "n,n_u_n,limit,relative_deviation", clt);
  double max_diff = 0.0;
  for (std::size_t k = 1; k < er_enum.size(); ++k) max_diff = std::max(max_diff, std::abs(er_enum[k] - table.ER[k]));
  w.json_file("summary.json", {{"kind", "exact"},
                               {"config_hash", c.hash_hex()},
                               {"validation", validation_to_json(c.dist)},
                               {"n", n},
                               {"renewal_residual", table.renewal_residual(std::min<std::size_t>(n, 4096))},
                               {"enumerated_up_to", er_enum.empty() ? 0 : er_enum.size() - 1},
                               {"max_enumeration_difference", max_diff},
                               {"warnings", res.warnings}});
}

void run_kappa(const ExperimentConfig& c, const fs::path& dir, ReportResult& res) {
  const json& p = c.params;
  Writer w{dir / "report", c.hash_hex(), &res};
  KappaOptions opt;
  opt.radius = param<double>(p, "radius");
  opt.grading = param<double>(p, "grading");
  const auto nodes = size_list(p, "nodes");
  const RefinementStudy st = kappa22_refinement(nodes, opt);
  const KappaResult& best = st.runs.back();
  const GnAuditResult audit =
      gn_audit(st.m_hat, best.state, param<std::size_t>(p, "audit_trials"), c.seed);
  std::string hist;
  for (std::size_t i = 0; i < st.runs.size(); ++i)
    hist += std::to_string(nodes[i]) + "," + num(st.runs[i].m_hat) + "," + num(st.runs[i].objective) + "," +
            num(st.runs[i].weinstein) + "," + std::to_string(st.runs[i].steps) + "," +
            (st.runs[i].converged ? "1" : "0") + "," + num(i == 0 ? 0.0 : st.relative_changes[i - 1]) + "\n";
  w.csv("refinement.csv", "nodes,M_hat,objective,weinstein,steps,converged,relative_change", hist);
  std::string opt_body;
  for (std::size_t i = 0; i < best.state.f.size(); ++i)
    opt_body += num(best.state.grid.r[i]) + "," + num(best.state.f[i]) + "\n";
  w.csv("optimizer.csv", "r,f", opt_body);
  const ConstantsReport constants = constants_report(c.dist, st.m_hat, st.uncertainty);
  json cj = constants_to_json(constants);
  cj["config_hash"] = c.hash_hex();
  w.json_file("constants.json", cj);
  const double gauss = gaussian_weinstein();
  w.json_file("summary.json", {{"kind", "kappa"},
                               {"config_hash", c.hash_hex()},
                               {"M_hat", st.m_hat},
                               {"M_hat_uncertainty", st.uncertainty},
                               {"refinement_stable", st.stable},
                               {"relative_changes", st.relative_changes},
                               {"gaussian_weinstein", gauss},
                               {"gaussian_trial_half_quotient", 0.5 * gauss},
                               {"gaussian_below_M_hat", 0.5 * gauss <= st.m_hat},
                               {"gn_audit_trials", audit.trials},
                               {"gn_audit_violations", audit.violations},
                               {"gn_audit_max_quotient", audit.max_quotient},
                               {"max_normalization_error", best.max_normalization_error},
                               {"boundary_value", best.last_free_value},
                               {"rescaled_quotient_difference",
                                std::abs(rescaled_weinstein(best.state, 2.5, 0.6) - best.weinstein)},
                               {"warnings", res.warnings}});
}

}  // namespace

// ---------------------------------------------------------------- public API

ExperimentKind experiment_kind_from_name(const std::string& name) {
  const auto it = kKinds.find(name);
  if (it == kKinds.end())
    throw ConfigError("unknown experiment kind '" + name +
                      "' (exact, identities, smoothed, deviations, lil, kappa)");
  return it->second;
}

std::string experiment_kind_name(ExperimentKind kind) {
  for (const auto& [name, k] : kKinds)
    if (k == kind) return name;
  return "?";
}

std::uint64_t ExperimentConfig::hash() const {
  json h = raw;
  h.erase("workers");
  return fnv1a64(h.dump());
}

std::string ExperimentConfig::hash_hex() const { return hex64(hash()); }

ExperimentConfig parse_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"distribution", "kind", "params", "seed", "replicas",
                                              "shard_size", "workers"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  ExperimentConfig c;
  if (!j.contains("kind")) throw ConfigError("config needs a 'kind'");
  if (!j["kind"].is_string()) throw ConfigError("'kind' must be a string");
  c.kind = experiment_kind_from_name(j["kind"].get<std::string>());
  c.dist = distribution_from_json(j.value("distribution", json("srw")), base_dir);
  try {
    c.seed = j.value("seed", std::uint64_t{1});
    const auto replicas = j.value("replicas", static_cast<long long>(default_replicas(c.kind)));
    const auto shard = j.value("shard_size", 1000LL);
    c.workers = j.value("workers", 0);
    if (replicas < 0) throw ConfigError("'replicas' must be >= 0");
    if (shard < 1) throw ConfigError("'shard_size' must be positive");
    if (c.workers < 0) throw ConfigError("'workers' must be >= 0");
    c.replicas = static_cast<std::size_t>(replicas);
    c.shard_size = static_cast<std::size_t>(shard);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (sharded(c.kind) && c.replicas == 0) throw ConfigError("this experiment kind needs replicas >= 1");
  c.params = default_params(c.kind);
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("'params' must be an object");
    for (const auto& [key, value] : j["params"].items()) {
      if (!c.params.contains(key))
        throw ConfigError("unknown parameter '" + key + "' for kind " + experiment_kind_name(c.kind));
      c.params[key] = value;
    }
  }
  try {
    validate_params(c);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  c.raw = {{"distribution", distribution_to_json(c.dist)},
           {"kind", experiment_kind_name(c.kind)},
           {"params", c.params},
           {"seed", c.seed},
           {"replicas", c.replicas},
           {"shard_size", c.shard_size},
           {"workers", c.workers}};
  return c;
}

ExperimentConfig load_config(const fs::path& file) {
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + file.string() + ": " + e.what());
  }
  return parse_config(j, file.parent_path());
}

fs::path default_output_root() {
  if (const char* env = std::getenv("RANGELAB_OUT"); env && *env) return env;
  return "rangelab-out";
}

RunResult run_experiment(ExperimentConfig c, const RunOptions& opt) {
  if (opt.seed) {
    c.seed = *opt.seed;
    c.raw["seed"] = c.seed;
  }
  if (opt.workers) {
    if (*opt.workers < 0) throw ConfigError("--workers must be >= 0");
    c.workers = *opt.workers;
    c.raw["workers"] = c.workers;
  }
  if (c.workers > 0) set_worker_count(c.workers);

  RunResult result;
  result.dir = opt.out.empty() ? default_output_root() / (experiment_kind_name(c.kind) + "-" + c.hash_hex()) : opt.out;
  const fs::path& dir = result.dir;
  fs::create_directories(dir);

  Manifest manifest{json::object(), dir / "manifest.json"};
  const bool have_manifest = fs::exists(manifest.file);
  if (opt.resume && have_manifest) {
    manifest.data = json::parse(read_file(manifest.file));
    if (manifest.data.value("config_hash", "") != c.hash_hex())
      throw ConfigError("cannot resume: " + dir.string() + " holds a run with a different config");
  } else {
    if (have_manifest) {
      fs::remove_all(dir / "shards");
      fs::remove_all(dir / "report");
    }
    manifest.data = {{"config_hash", c.hash_hex()},
                     {"tool_version", kToolVersion},
                     {"kind", experiment_kind_name(c.kind)},
                     {"started", now_iso()},
                     {"finished", nullptr},
                     {"completed", json::array()}};
  }
  json stored = c.raw;
  stored.erase("workers");
  write_file_atomic(dir / "config.json", stored.dump(2) + "\n");

  if (!sharded(c.kind)) {
    ReportResult rep;
    if (c.kind == ExperimentKind::kExact)
      run_exact(c, dir, opt.enumerate, rep);
    else
      run_kappa(c, dir, rep);
    manifest.data["shards_total"] = 0;
    manifest.data["finished"] = now_iso();
    manifest.save();
    result.complete = true;
    return result;
  }

  const std::size_t shards = (c.replicas + c.shard_size - 1) / c.shard_size;
  result.shards_total = shards;
  manifest.data["shards_total"] = shards;
  manifest.data["shard_size"] = c.shard_size;
  manifest.data["replicas"] = c.replicas;
  manifest.save();

  std::optional<ReturnProbTable> table;
  if (const std::size_t len = table_length(c); len > 0)
    table = cached_return_table(c.dist, len, dir / "cache", {exec_for(c)});

  auto done = manifest.completed();
  std::size_t fresh = 0;
  for (std::size_t k = 0; k < shards; ++k) {
    if (done.count(k) && fs::exists(shard_file(dir, k))) continue;
    if (opt.stop_after && fresh >= *opt.stop_after) break;
    const std::size_t lo = k * c.shard_size, hi = std::min(c.replicas, lo + c.shard_size);
    std::vector<std::string> lines;
    switch (c.kind) {
      case ExperimentKind::kIdentities:
        lines = identity_records(c, lo, hi);
        break;
      case ExperimentKind::kSmoothed:
        lines = smoothed_records(c, lo, hi);
        break;
      case ExperimentKind::kDeviations:
        lines = deviation_records(c, *table, lo, hi);
        break;
      case ExperimentKind::kLil:
        lines = lil_records(c, *table, lo, hi);
        break;
      default:
        break;
    }
    const json header = {{"schema", "rangelab-" + experiment_kind_name(c.kind) + "-v1"},
                         {"config_hash", c.hash_hex()},
                         {"shard", k},
                         {"first_replica", lo},
                         {"replicas", hi - lo},
                         {"columns", shard_columns(c.kind)}};
    std::string text = header.dump() + "\n";
    for (const auto& l : lines) text += l + "\n";
    write_file_atomic(shard_file(dir, k), text);
    done.insert(k);
    manifest.data["completed"] = json(std::vector<std::size_t>(done.begin(), done.end()));
    manifest.save();
    ++fresh;
  }
  result.shards_done = done.size();
  result.complete = done.size() == shards;
  if (result.complete) {
    manifest.data["finished"] = now_iso();
    manifest.save();
    const ReportResult rep = report_run(dir);
    result.identity_violations = rep.identity_violations;
  }
  return result;
}

ReportResult report_run(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.json") || !fs::exists(dir / "config.json"))
    throw ConfigError("no run found in " + dir.string() + " (missing manifest.json or config.json)");
  const ExperimentConfig c = parse_config(json::parse(read_file(dir / "config.json")), dir);
  const json manifest = json::parse(read_file(dir / "manifest.json"));
  if (manifest.value("config_hash", "") != c.hash_hex())
    throw ConfigError("manifest and config disagree in " + dir.string());
  ReportResult res;
  if (!sharded(c.kind)) {
    for (const auto& e : fs::directory_iterator(dir / "report")) res.files.push_back(e.path());
    std::sort(res.files.begin(), res.files.end());
    return res;
  }
  const std::size_t shards = manifest.value("shards_total", std::size_t{0});
  const json recs = load_records(dir, c, shards, res);
  if (recs.empty()) throw ConfigError("run in " + dir.string() + " has no completed shards");
  Writer w{dir / "report", c.hash_hex(), &res};
  std::optional<ReturnProbTable> table;
  if (const std::size_t len = table_length(c); len > 0) {
    std::size_t need = len;
    if (c.kind == ExperimentKind::kLil) need = std::max<std::size_t>(len, std::size_t{1} << 19);
    table = cached_return_table(c.dist, need, dir / "cache", {exec_for(c)});
  }
  switch (c.kind) {
    case ExperimentKind::kIdentities:
      report_identities(recs, c, w, res);
      break;
    case ExperimentKind::kSmoothed:
      report_smoothed(recs, c, w, res);
      break;
    case ExperimentKind::kDeviations:
      report_deviations(recs, c, *table, w, res);
      break;
    case ExperimentKind::kLil:
      report_lil(recs, c, *table, w, res);
      break;
    default:
      break;
  }
  return res;
}

}  // namespace rangelab
