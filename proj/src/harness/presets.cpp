#include "dqgp/harness/presets.hpp"

#include "dqgp/errors.hpp"

namespace dqgp::harness {

namespace {

const std::vector<std::string> kBase{"lemniscate", "table-lemniscate", "table-circle", "table-spiral"};

ExperimentConfig base(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.trajectory.duration = 40.0;
  c.trajectory.base_height = 2.0;
  if (name == "lemniscate" || name == "table-lemniscate") {
    c.trajectory.shape = sim::Shape::Lemniscate;
    c.trajectory.amplitude = 4.0;
    c.trajectory.speed_profile = sim::SpeedProfile::LinearlyDecreasing;
    c.trajectory.v0 = 1.0;
    c.trajectory.v1 = 0.5;
  } else if (name == "table-circle") {
    c.trajectory.shape = sim::Shape::Circle;
    c.trajectory.amplitude = 3.0;
    c.trajectory.v0 = 1.0;
  } else if (name == "table-spiral") {
    c.trajectory.shape = sim::Shape::Spiral;
    c.trajectory.amplitude = 3.0;
    c.trajectory.v0 = 1.0;
    c.trajectory.climb_rate = 0.1;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.field.center = Vec3(0.0, 0.0, 2.0);
  c.field.radius = 1.0;
  c.field.always_on = name != "lemniscate";
  c.seeds.clear();
  for (std::uint64_t s = 1; s <= 16; ++s) c.seeds.push_back(s);
  return c;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
  const std::string suffix = "-openloop";
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    ExperimentConfig c = base(name.substr(0, name.size() - suffix.size()));
    c.compensate = false;
    return c;
  }
  return base(name);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& b : kBase) {
    out.push_back(b);
    out.push_back(b + "-openloop");
  }
  return out;
}

}  // namespace dqgp::harness
