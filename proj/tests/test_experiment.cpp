#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "rangelab/error.hpp"
#include "rangelab/experiment.hpp"
#include "rangelab/text_io.hpp"

namespace rangelab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rangelab-test-" + name);
  fs::remove_all(p);
  return p;
}

// Every file of a run except the manifest (which carries timestamps).
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "nope"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "exact"}, {"extra", 1}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "exact"}, {"params", {{"n", -4}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "exact"}, {"params", {{"m", 4}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "identities"}, {"replicas", 0}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "identities"}, {"params", {{"eps", 0.01}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "deviations"}, {"replicas", 500}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "kappa"}, {"params", {{"nodes", {128}}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "exact"}, {"distribution", "hexagonal"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "exact"}, {"seed", "abc"}}), ConfigError);
}

TEST(Config, HashIgnoresWorkersOnly) {
  const auto a = parse_config(json{{"kind", "identities"}, {"workers", 1}});
  const auto b = parse_config(json{{"kind", "identities"}, {"workers", 8}});
  const auto c = parse_config(json{{"kind", "identities"}, {"seed", 2}});
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash_hex().size(), 16u);
  // Defaults are filled in, so an explicit default hashes the same.
  const auto d = parse_config(json{{"kind", "identities"}, {"params", {{"n", 1024}}}});
  EXPECT_EQ(a.hash(), d.hash());
}

TEST(Run, OutputsIndependentOfWorkerCount) {
  const auto cfg = parse_config(json{{"kind", "identities"}, {"replicas", 60}, {"shard_size", 25}, {"params", {{"n", 256}}}});
  const fs::path a = scratch("w1"), b = scratch("w3");
  RunOptions o1, o3;
  o1.out = a;
  o1.workers = 1;
  o3.out = b;
  o3.workers = 3;
  const RunResult r1 = run_experiment(cfg, o1);
  run_experiment(cfg, o3);
  EXPECT_TRUE(r1.complete);
  EXPECT_EQ(r1.shards_total, 3u);
  EXPECT_EQ(r1.identity_violations, 0u);
  EXPECT_EQ(snapshot(a), snapshot(b));
  // Rerun into the same directory: still identical.
  run_experiment(cfg, o1);
  EXPECT_EQ(snapshot(a), snapshot(b));
}

TEST(Run, CrashResumeMatchesUninterruptedRun) {
  const auto cfg = parse_config(
      json{{"kind", "lil"}, {"replicas", 12}, {"shard_size", 4}, {"params", {{"ns", {64, 256, 1024}}}}});
  const fs::path full = scratch("full"), part = scratch("part");
  RunOptions o;
  o.out = full;
  run_experiment(cfg, o);
  RunOptions s;
  s.out = part;
  s.stop_after = 1;
  const RunResult first = run_experiment(cfg, s);
  EXPECT_FALSE(first.complete);
  EXPECT_EQ(first.shards_done, 1u);
  EXPECT_FALSE(fs::exists(part / "report"));
  // A partial report is possible and warns about the missing shards.
  const ReportResult partial = report_run(part);
  EXPECT_FALSE(partial.warnings.empty());
  fs::remove_all(part / "report");
  RunOptions r;
  r.out = part;
  r.resume = true;
  const RunResult second = run_experiment(cfg, r);
  EXPECT_TRUE(second.complete);
  EXPECT_EQ(snapshot(full), snapshot(part));
}

TEST(Run, ResumeRefusesDifferentConfig) {
  const auto cfg = parse_config(json{{"kind", "smoothed"}, {"replicas", 4}, {"params", {{"eps", {1.0}}}}});
  const fs::path dir = scratch("mismatch");
  RunOptions o;
  o.out = dir;
  run_experiment(cfg, o);
  o.resume = true;
  o.seed = 99;
  EXPECT_THROW(run_experiment(cfg, o), ConfigError);
}

TEST(Run, EveryOutputCarriesConfigHash) {
  const auto cfg = parse_config(json{{"kind", "deviations"},
                                     {"replicas", 10000},
                                     {"shard_size", 5000},
                                     {"params", {{"ns", {64, 128}}, {"bs", {2, 3}}, {"bootstrap", 50}}}});
  const fs::path dir = scratch("hash");
  RunOptions o;
  o.out = dir;
  run_experiment(cfg, o);
  const std::string tag = "config_hash=" + cfg.hash_hex();
  std::size_t csv = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    // cache/ holds return tables keyed by distribution, shared across configs.
    if (fs::relative(e.path(), dir).begin()->string() == "cache") continue;
    const auto ext = e.path().extension();
    if (ext == ".csv") {
      ++csv;
      std::ifstream in(e.path());
      std::string first;
      std::getline(in, first);
      EXPECT_NE(first.find(tag), std::string::npos) << e.path();
    } else if (ext == ".jsonl") {
      std::ifstream in(e.path());
      std::string first;
      std::getline(in, first);
      const json h = json::parse(first);
      EXPECT_EQ(h["config_hash"], cfg.hash_hex());
      EXPECT_TRUE(h.contains("columns"));
      EXPECT_TRUE(h.contains("schema"));
    } else if (ext == ".json" && e.path().parent_path().filename() == "report") {
      EXPECT_EQ(json::parse(read_file(e.path()))["config_hash"], cfg.hash_hex()) << e.path();
    }
  }
  EXPECT_GE(csv, 3u);
  const std::string tails = read_file(dir / "report" / "tails.csv");
  EXPECT_NE(tails.find("n,b,side,variant,level,threshold,exceedances,replicas,frequency,ci_lo,ci_hi,rate"),
            std::string::npos);
}

TEST(Run, ExactEnumerationColumnMatches) {
  const auto cfg = parse_config(json{{"kind", "exact"}, {"params", {{"n", 9}}}});
  const fs::path dir = scratch("exact");
  RunOptions o;
  o.out = dir;
  o.enumerate = true;
  run_experiment(cfg, o);
  std::ifstream in(dir / "report" / "returns.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "k,u,H,r,f,ER,ER_enum");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto last = line.rfind(','), prev = line.rfind(',', last - 1);
    EXPECT_EQ(line.substr(prev + 1, last - prev - 1), line.substr(last + 1)) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 10);
}

TEST(Report, EmptyDirectoryIsAnError) {
  const fs::path dir = scratch("empty");
  fs::create_directories(dir);
  EXPECT_THROW(report_run(dir), ConfigError);
}

TEST(Report, DefaultRootFollowsEnvironment) {
  setenv("RANGELAB_OUT", "/tmp/somewhere", 1);
  EXPECT_EQ(default_output_root(), fs::path("/tmp/somewhere"));
  unsetenv("RANGELAB_OUT");
  EXPECT_EQ(default_output_root(), fs::path("rangelab-out"));
}

// CLI exit codes.

int cli(const std::string& args) {
  const std::string cmd = std::string(RANGELAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = fs::temp_directory_path() / ("rangelab-test-" + name + ".json");
  write_file_atomic(p, j.dump());
  return p;
}

TEST(Cli, ExitCodes) {
  const auto good = write_config("good", {{"kind", "identities"}, {"replicas", 20}, {"params", {{"n", 128}}}});
  const auto bad = write_config("bad", {{"kind", "identities"}, {"params", {{"bogus", 1}}}});
  const auto broken = fs::temp_directory_path() / "rangelab-test-broken.json";
  write_file_atomic(broken, "{ not json");
  // A negative tolerance turns every exact check into a reported violation.
  const auto strict =
      write_config("strict", {{"kind", "identities"}, {"replicas", 5}, {"params", {{"n", 64}, {"q_tolerance", -1.0}}}});
  const fs::path out = scratch("cli");
  EXPECT_EQ(cli("validate --config " + good.string()), 0);
  EXPECT_EQ(cli("validate --dist king"), 0);
  EXPECT_EQ(cli("validate --config " + bad.string()), 2);
  EXPECT_EQ(cli("validate --config " + broken.string()), 2);
  EXPECT_EQ(cli("run --config " + bad.string()), 2);
  EXPECT_EQ(cli("run --config " + good.string() + " --out " + out.string() + " --workers 2"), 0);
  EXPECT_EQ(cli("report " + out.string()), 0);
  EXPECT_EQ(cli("report " + (out / "nothing").string()), 2);
  EXPECT_EQ(cli("run --config " + strict.string() + " --out " + (out / "strict").string()), 4);
  EXPECT_EQ(cli("enumerate-oracle --dist srw -n 5"), 0);
  EXPECT_EQ(cli("enumerate-oracle --dist king -n 30"), 3);
  EXPECT_EQ(cli("run"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
}

}  // namespace
}  // namespace rangelab
