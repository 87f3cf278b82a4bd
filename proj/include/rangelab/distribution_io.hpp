#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rangelab/step_distribution.hpp"

namespace rangelab {

/// Accepts a built-in name ("srw"), an inline object
/// {"name": ..., "steps": [[dx, dy, num, den], ...]}, or {"file": "path.json"}.
/// Relative file paths resolve against `base_dir`.
StepDistribution distribution_from_json(const nlohmann::json& j,
                                        const std::filesystem::path& base_dir = {});

StepDistribution load_distribution(const std::filesystem::path& file);

nlohmann::json distribution_to_json(const StepDistribution& dist);

nlohmann::json validation_to_json(const StepDistribution& dist);

}  // namespace rangelab
