// rangelab: config-driven experiments on the range of planar random walks.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rangelab/constants.hpp"
#include "rangelab/distribution_io.hpp"
#include "rangelab/enumeration.hpp"
#include "rangelab/error.hpp"
#include "rangelab/experiment.hpp"
#include "rangelab/kappa.hpp"
#include "rangelab/text_io.hpp"

namespace {

using nlohmann::json;
using namespace rangelab;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitIdentity = 4;

StepDistribution parse_dist(const std::string& spec) {
  if (spec.find('/') != std::string::npos || spec.ends_with(".json")) return load_distribution(spec);
  return StepDistribution::builtin(spec);
}

int cmd_validate(const std::string& config, const std::string& dist) {
  if (config.empty() && dist.empty()) throw ConfigError("validate needs --config or --dist");
  json out;
  if (!config.empty()) {
    const ExperimentConfig c = load_config(config);
    out = {{"config_hash", c.hash_hex()},
           {"kind", experiment_kind_name(c.kind)},
           {"config", c.raw},
           {"distribution", validation_to_json(c.dist)}};
  } else {
    out = validation_to_json(parse_dist(dist));
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_run(const std::string& config, const RunOptions& opt) {
  const RunResult r = run_experiment(load_config(config), opt);
  std::cout << r.dir.string() << "\n";
  if (!r.complete) {
    std::cerr << "rangelab: stopped after " << r.shards_done << " of " << r.shards_total
              << " shards; rerun with --resume\n";
    return kExitOk;
  }
  if (r.identity_violations > 0) {
    std::cerr << "rangelab: " << r.identity_violations << " identity violations (see report/summary.json)\n";
    return kExitIdentity;
  }
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  const ReportResult r = report_run(dir);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : r.files) std::cout << f.string() << "\n";
  return r.identity_violations > 0 ? kExitIdentity : kExitOk;
}

int cmd_kappa(const std::string& dist, const std::vector<std::size_t>& nodes, double radius, double grading,
              const std::string& out) {
  KappaOptions base;
  base.radius = radius;
  base.grading = grading;
  for (auto n : nodes)
    if (n < 256) throw ConfigError("kappa: grids need at least 256 nodes");
  const RefinementStudy st = kappa22_refinement(nodes, base);
  json j = constants_to_json(constants_report(parse_dist(dist), st.m_hat, st.uncertainty));
  j["refinement"] = {{"nodes", nodes}, {"relative_changes", st.relative_changes}, {"stable", st.stable}};
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
  return kExitOk;
}

int cmd_enumerate(const std::string& dist, std::size_t n) {
  const EnumerationResult e = enumerate_paths(parse_dist(dist), n);
  std::cout << "# " << e.dist_name << " paths=" << e.paths << "\n";
  std::cout << "k,ER,ER_exact,EL,u\n";
  for (std::size_t k = 0; k <= e.n; ++k)
    std::cout << k << "," << format_double(e.expected_range[k]) << "," << e.expected_range_exact[k] << ","
              << format_double(e.expected_self_intersections[k]) << "," << format_double(e.return_probability[k])
              << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rangelab: range of planar random walks, exact tables, identities and Monte Carlo probes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config, dist, out, run_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::size_t> stop_after;
  bool resume = false, enumerate = false;

  auto* validate = app.add_subcommand("validate", "Check a config or a step distribution");
  validate->add_option("--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  validate->add_option("--dist", dist, "Built-in distribution name or JSON file");

  auto* run = app.add_subcommand("run", "Run an experiment into a run directory");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--workers", workers, "Worker threads (0 = runtime default)");
  run->add_option("--out", out, "Run directory (default: $RANGELAB_OUT/<kind>-<hash>)");
  run->add_flag("--resume", resume, "Keep finished shards of a matching run");
  run->add_flag("--enumerate", enumerate, "exact mode: add the path-enumeration column");
  run->add_option("--stop-after", stop_after, "Stop after N new shards")->group("");

  auto* report = app.add_subcommand("report", "Aggregate the shards of a run directory");
  report->add_option("dir", run_dir, "Run directory");
  report->add_option("--out", run_dir, "Run directory");

  std::vector<std::size_t> nodes = {256, 512, 1024};
  double radius = 32.0, grading = 3.0;
  std::string kappa_dist = "srw";
  auto* kappa = app.add_subcommand("kappa", "Solve for kappa(2,2) and print the constants report");
  kappa->add_option("--dist", kappa_dist, "Distribution for the Gamma-dependent constants");
  kappa->add_option("--nodes", nodes, "Grid sizes of the refinement study")->delimiter(',');
  kappa->add_option("--radius", radius, "Outer radius");
  kappa->add_option("--grading", grading, "Grid grading (0 = uniform)");
  kappa->add_option("--out", out, "Write the JSON report here instead of stdout");

  std::size_t enum_n = 9;
  std::string enum_dist = "srw";
  auto* oracle = app.add_subcommand("enumerate-oracle", "Exact means by visiting every path");
  oracle->add_option("--dist", enum_dist, "Built-in distribution name or JSON file");
  oracle->add_option("-n,--n", enum_n, "Path length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*validate) return cmd_validate(config, dist);
    if (*run) {
      RunOptions opt;
      opt.seed = seed;
      opt.workers = workers;
      opt.out = out;
      opt.resume = resume;
      opt.enumerate = enumerate;
      opt.stop_after = stop_after;
      return cmd_run(config, opt);
    }
    if (*report) {
      if (run_dir.empty()) throw ConfigError("report needs a run directory");
      return cmd_report(run_dir);
    }
    if (*kappa) return cmd_kappa(kappa_dist, nodes, radius, grading, out);
    if (*oracle) return cmd_enumerate(enum_dist, enum_n);
  } catch (const ConfigError& e) {
    std::cerr << "rangelab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "rangelab: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    std::cerr << "rangelab: resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const IdentityViolation& e) {
    std::cerr << "rangelab: identity violation: " << e.what() << "\n";
    return kExitIdentity;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "rangelab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::bad_alloc&) {
    std::cerr << "rangelab: resource error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "rangelab: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
