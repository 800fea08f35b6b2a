#pragma once

#include <string>
#include <vector>

#include "dqgp/harness/experiment.hpp"

namespace dqgp::harness {

/// Built-in scenarios. Each base name has an "-openloop" twin with
/// compensate = false and the same config name, so that summary tables pair
/// them.
///   lemniscate        disturbance bump at the crossing point, speed 1 → 0.5 m/s
///   table-lemniscate  always-on disturbance, same path
///   table-circle      always-on, radius 3 m circle at 1 m/s
///   table-spiral      always-on, radius 3 m ascending at 0.1 m/s
/// Throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace dqgp::harness
