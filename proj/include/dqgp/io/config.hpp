#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dqgp/harness/experiment.hpp"

namespace dqgp::io {

using nlohmann::json;

/// Fully resolved configuration as JSON. Keys mirror ExperimentConfig.
json config_to_json(const harness::ExperimentConfig& cfg);

/// Starts from `"preset"` if present (otherwise library defaults) and
/// overlays every other key. Unknown keys and ill-typed values throw
/// ConfigError with the JSON path.
harness::ExperimentConfig config_from_json(const json& j);

/// `path.to.key=value`; the value is parsed as JSON when possible and kept
/// as a string otherwise. Intermediate objects are created.
void apply_override(json& j, const std::string& assignment);

/// Reads a config file. Throws ConfigError naming the path when the file is
/// missing or not valid JSON.
json load_config_file(const std::string& path);

/// SHA-1 of the canonical (sorted-key, compact) resolved config, so it
/// does not depend on key order or on how the config was spelled.
std::string config_digest(const harness::ExperimentConfig& cfg);

}  // namespace dqgp::io
