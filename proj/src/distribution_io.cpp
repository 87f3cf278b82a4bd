#include "rangelab/distribution_io.hpp"

#include <fstream>

#include "rangelab/error.hpp"

namespace rangelab {

using nlohmann::json;

StepDistribution distribution_from_json(const json& j, const std::filesystem::path& base_dir) {
  try {
    if (j.is_string()) return StepDistribution::builtin(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("distribution must be a name or an object");
    if (j.contains("file")) {
      std::filesystem::path p = j.at("file").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return load_distribution(p);
    }
    if (j.contains("builtin")) return StepDistribution::builtin(j.at("builtin").get<std::string>());
    std::vector<StepEntry> entries;
    for (const auto& row : j.at("steps")) {
      if (!row.is_array() || row.size() != 4)
        throw ConfigError("each step must be [dx, dy, numerator, denominator]");
      entries.push_back({{row[0].get<int>(), row[1].get<int>()},
                         make_rational(row[2].get<std::int64_t>(), row[3].get<std::int64_t>())});
    }
    return StepDistribution(j.value("name", std::string("custom")), std::move(entries));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed distribution: ") + e.what());
  }
}

StepDistribution load_distribution(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open distribution file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + file.string() + ": " + e.what());
  }
  return distribution_from_json(j, file.parent_path());
}

json distribution_to_json(const StepDistribution& dist) {
  json steps = json::array();
  for (const auto& e : dist.entries())
    steps.push_back({e.step.x, e.step.y, e.prob.num, e.prob.den});
  return {{"name", dist.name()}, {"steps", steps}};
}

json validation_to_json(const StepDistribution& dist) {
  const auto& r = dist.report();
  return {{"name", dist.name()},
          {"symmetric", r.symmetric},
          {"mean_zero", r.mean_zero},
          {"sums_to_one", r.sums_to_one},
          {"full_lattice", r.full_lattice},
          {"strongly_aperiodic", r.strongly_aperiodic},
          {"period", r.period},
          {"covariance", {{r.covariance[0][0], r.covariance[0][1]},
                          {r.covariance[1][0], r.covariance[1][1]}}},
          {"det_covariance", r.det_covariance},
          {"two_pi_sqrt_det", dist.two_pi_sqrt_det()},
          // Finite support: every moment exists, so the log-moment exponent has no role.
          {"moment_delta", "not applicable (finite support)"},
          {"hash", dist.hash()}};
}

}  // namespace rangelab
