#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rangelab/step_distribution.hpp"

namespace rangelab {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ExperimentKind { kExact, kIdentities, kSmoothed, kDeviations, kLil, kKappa };

ExperimentKind experiment_kind_from_name(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

/// Parsed run configuration. `raw` keeps the normalized JSON: the config hash
/// covers everything except the worker count, so outputs are identical under
/// any number of workers.
struct ExperimentConfig {
  nlohmann::json raw;
  StepDistribution dist = StepDistribution::srw();
  ExperimentKind kind = ExperimentKind::kExact;
  nlohmann::json params;
  std::uint64_t seed = 1;
  std::size_t replicas = 0;
  std::size_t shard_size = 1000;
  int workers = 0;

  std::uint64_t hash() const;
  std::string hash_hex() const;
};

/// Throws ConfigError with a diagnostic on any invalid field.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config
  std::optional<int> workers;
  std::filesystem::path out;  // empty: default root / <kind>-<hash>
  bool resume = false;
  bool enumerate = false;  // exact mode: add the path-enumeration column
  /// Stop after this many newly completed shards (simulates an interruption).
  std::optional<std::size_t> stop_after;
};

struct RunResult {
  std::filesystem::path dir;
  std::size_t shards_total = 0;
  std::size_t shards_done = 0;
  bool complete = false;
  std::uint64_t identity_violations = 0;
};

/// RANGELAB_OUT if set, else ./rangelab-out.
std::filesystem::path default_output_root();

/// Writes config.json, shards/*.jsonl (atomically, one per replica range),
/// manifest.json and, when complete, the report. Resuming requires a
/// manifest with the same config hash; finished shards are kept.
RunResult run_experiment(ExperimentConfig config, const RunOptions& options);

struct ReportResult {
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
  std::uint64_t identity_violations = 0;
};

/// Aggregates the shards of a run directory into report/*.csv and
/// report/summary.json. Missing shards give a partial report with warnings;
/// a directory without a run throws ConfigError.
ReportResult report_run(const std::filesystem::path& dir);

}  // namespace rangelab
