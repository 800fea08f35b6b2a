#include "dqgp/io/config.hpp"

#include <fstream>

#include "dqgp/errors.hpp"
#include "dqgp/harness/presets.hpp"
#include "dqgp/io/manifest.hpp"

namespace dqgp::io {

using harness::ExperimentConfig;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

const char* rotation_name(gp::RotationDistance r) {
  return r == gp::RotationDistance::Chordal ? "chordal" : "projective";
}

json kernel_json(const gp::KernelConfig& k) {
  return {{"sigma_f2", k.sigma_f2}, {"ell", k.ell},         {"lambda", k.lambda},
          {"ard", k.ard},           {"ell_rot", k.ell_rot}, {"ell_trans", k.ell_trans},
          {"rotation", rotation_name(k.rotation)}};
}

json grid_json(const gp::HyperGrid& g) {
  return {{"sigma_f2", g.sigma_f2}, {"ell", g.ell}, {"lambda", g.lambda}, {"noise_var", g.noise_var}, {"ard", g.ard}};
}

// Typed reads that report the JSON path on failure.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  Reader obj(const char* key) const { return {at(key), path_ + key + "."}; }

  double num(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "a number");
    return v.get<double>();
  }
  std::size_t count(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(key, "a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  bool flag(const char* key) const {
    const json& v = at(key);
    if (!v.is_boolean()) fail(key, "true or false");
    return v.get<bool>();
  }
  std::string str(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "a string");
    return v.get<std::string>();
  }
  std::vector<double> list(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  Vec3 vec(const char* key) const {
    const auto l = list(key);
    if (l.size() != 3) fail(key, "a 3-vector");
    return {l[0], l[1], l[2]};
  }
  /// A scalar k (meaning k·I) or a 3x3 nested array.
  Mat3 mat(const char* key) const {
    const json& v = at(key);
    if (v.is_number()) return Mat3::Identity() * v.get<double>();
    Mat3 m;
    if (!v.is_array() || v.size() != 3) fail(key, "a number or a 3x3 array");
    for (int i = 0; i < 3; ++i) {
      const json& row = v[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != 3) fail(key, "a number or a 3x3 array");
      for (int c = 0; c < 3; ++c) {
        if (!row[static_cast<std::size_t>(c)].is_number()) fail(key, "a number or a 3x3 array");
        m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
    }
    return m;
  }

 private:
  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError("config: missing key '" + path_ + key + "'");
    return j_.at(key);
  }
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError("config: '" + path_ + key + "' must be " + what);
  }

  const json& j_;
  std::string path_;
};

gp::KernelConfig read_kernel(const Reader& r) {
  gp::KernelConfig k;
  k.sigma_f2 = r.num("sigma_f2");
  k.ell = r.num("ell");
  k.lambda = r.num("lambda");
  k.ard = r.flag("ard");
  k.ell_rot = r.num("ell_rot");
  k.ell_trans = r.num("ell_trans");
  const std::string rot = r.str("rotation");
  if (rot == "chordal") {
    k.rotation = gp::RotationDistance::Chordal;
  } else if (rot == "projective") {
    k.rotation = gp::RotationDistance::Projective;
  } else {
    throw ConfigError("config: kernel rotation must be 'chordal' or 'projective', got '" + rot + "'");
  }
  return k;
}

gp::HyperGrid read_grid(const Reader& r) {
  gp::HyperGrid g;
  g.sigma_f2 = r.list("sigma_f2");
  g.ell = r.list("ell");
  g.lambda = r.list("lambda");
  g.noise_var = r.list("noise_var");
  g.ard = r.flag("ard");
  return g;
}

// Every key of `user` must exist in `base`, recursively. Arrays and
// leaves replace the base value.
void overlay(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError("config: '" + path + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("config: unknown key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object()) {
      overlay(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

ExperimentConfig parse_resolved(const json& j) {
  const Reader r(j, "");
  ExperimentConfig c;
  c.name = r.str("name");

  const Reader t = r.obj("trajectory");
  try {
    c.trajectory.shape = sim::shape_from_string(t.str("shape"));
    c.trajectory.speed_profile = sim::speed_profile_from_string(t.str("speed_profile"));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.trajectory.amplitude = t.num("amplitude");
  c.trajectory.base_height = t.num("base_height");
  c.trajectory.duration = t.num("duration");
  c.trajectory.v0 = t.num("v0");
  c.trajectory.v1 = t.num("v1");
  c.trajectory.climb_rate = t.num("climb_rate");

  const Reader d = r.obj("disturbance");
  c.field.enabled = d.flag("enabled");
  c.field.center = d.vec("center");
  c.field.radius = d.num("radius");
  c.field.yaw_rate_amp = d.num("yaw_rate_amp");
  c.field.climb_amp = d.num("climb_amp");
  c.field.always_on = d.flag("always_on");

  const Reader s = r.obj("sensor");
  c.noise.mag_angle_sigma = s.num("mag_angle_sigma");
  c.noise.pos_sigma = s.num("pos_sigma");
  c.noise.gyro_arw = s.num("gyro_arw");
  c.noise.vel_noise_density = s.num("vel_noise_density");
  c.noise.pose_rate = s.num("pose_rate");
  c.noise.imu_rate = s.num("imu_rate");
  c.noise.seed = s.count("seed");

  const Reader g = r.obj("gains");
  try {
    c.gains = control::GainSchedule::from_matrices(g.mat("K_omega"), g.mat("K_v"));
  } catch (const Error& e) {
    throw ConfigError(std::string("config: gains: ") + e.what());
  }

  c.dt = r.num("dt");
  const Reader o = r.obj("initial_offset");
  const Vec3 axis = o.vec("axis");
  const double angle = o.num("angle");
  if (angle != 0.0 && !(axis.norm() > 0.0)) throw ConfigError("config: initial_offset.axis must be nonzero");
  c.initial_offset.attitude = angle == 0.0 ? UnitQuaternion() : UnitQuaternion::from_axis_angle(axis, angle);
  c.initial_offset.position = o.vec("position");

  const Reader p = r.obj("gp");
  c.gp.enabled = p.flag("enabled");
  c.gp.kernel_omega = read_kernel(p.obj("kernel_omega"));
  c.gp.kernel_v = read_kernel(p.obj("kernel_v"));
  c.gp.grid_omega = read_grid(p.obj("grid_omega"));
  c.gp.grid_v = read_grid(p.obj("grid_v"));
  c.gp.refit_hyper = p.flag("refit_hyper");
  c.gp.noise_scale = p.list("noise_scale");
  c.gp.capacity = p.count("capacity");
  c.gp.batch = p.count("batch");
  c.gp.n_end = p.count("n_end");
  c.gp.warmup = p.count("warmup");
  c.gp.label_span = static_cast<int>(p.count("label_span"));
  c.gp.xi_omega = p.num("xi_omega");
  c.gp.xi_v = p.num("xi_v");
  c.gp.gamma_omega = p.num("gamma_omega");
  c.gp.gamma_v = p.num("gamma_v");
  c.gp.c_grid_extra = p.count("c_grid_extra");

  c.compensate = r.flag("compensate");
  c.seeds.clear();
  if (!j.at("seeds").is_array()) throw ConfigError("config: 'seeds' must be an array of integers");
  for (const auto& v : j.at("seeds")) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError("config: 'seeds' must be an array of nonnegative integers");
    }
    c.seeds.push_back(v.get<std::uint64_t>());
  }
  c.settle = r.num("settle");
  c.window_len = r.num("window_len");
  return c;
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  const Vec3 rv = rotation_vector(c.initial_offset.attitude);
  const double angle = rv.norm();
  const Vec3 axis = angle > 0.0 ? Vec3(rv / angle) : Vec3(0.0, 0.0, 1.0);
  return {
      {"name", c.name},
      {"trajectory",
       {{"shape", sim::to_string(c.trajectory.shape)},
        {"amplitude", c.trajectory.amplitude},
        {"base_height", c.trajectory.base_height},
        {"duration", c.trajectory.duration},
        {"speed_profile", sim::to_string(c.trajectory.speed_profile)},
        {"v0", c.trajectory.v0},
        {"v1", c.trajectory.v1},
        {"climb_rate", c.trajectory.climb_rate}}},
      {"disturbance",
       {{"enabled", c.field.enabled},
        {"center", vec_json(c.field.center)},
        {"radius", c.field.radius},
        {"yaw_rate_amp", c.field.yaw_rate_amp},
        {"climb_amp", c.field.climb_amp},
        {"always_on", c.field.always_on}}},
      {"sensor",
       {{"mag_angle_sigma", c.noise.mag_angle_sigma},
        {"pos_sigma", c.noise.pos_sigma},
        {"gyro_arw", c.noise.gyro_arw},
        {"vel_noise_density", c.noise.vel_noise_density},
        {"pose_rate", c.noise.pose_rate},
        {"imu_rate", c.noise.imu_rate},
        {"seed", c.noise.seed}}},
      {"gains", {{"K_omega", mat_json(c.gains.K_omega)}, {"K_v", mat_json(c.gains.K_v)}}},
      {"dt", c.dt},
      {"initial_offset", {{"axis", vec_json(axis)}, {"angle", angle}, {"position", vec_json(c.initial_offset.position)}}},
      {"gp",
       {{"enabled", c.gp.enabled},
        {"kernel_omega", kernel_json(c.gp.kernel_omega)},
        {"kernel_v", kernel_json(c.gp.kernel_v)},
        {"grid_omega", grid_json(c.gp.grid_omega)},
        {"grid_v", grid_json(c.gp.grid_v)},
        {"refit_hyper", c.gp.refit_hyper},
        {"noise_scale", c.gp.noise_scale},
        {"capacity", c.gp.capacity},
        {"batch", c.gp.batch},
        {"n_end", c.gp.n_end},
        {"warmup", c.gp.warmup},
        {"label_span", c.gp.label_span},
        {"xi_omega", c.gp.xi_omega},
        {"xi_v", c.gp.xi_v},
        {"gamma_omega", c.gp.gamma_omega},
        {"gamma_v", c.gp.gamma_v},
        {"c_grid_extra", c.gp.c_grid_extra}}},
      {"compensate", c.compensate},
      {"seeds", c.seeds},
      {"settle", c.settle},
      {"window_len", c.window_len},
  };
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig base;
  json user = j;
  if (user.contains("preset")) {
    if (!user["preset"].is_string()) throw ConfigError("config: 'preset' must be a string");
    base = harness::preset(user["preset"].get<std::string>());
    user.erase("preset");
  }
  json merged = config_to_json(base);
  overlay(merged, user, "");
  ExperimentConfig c = parse_resolved(merged);
  c.validate();
  return c;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return j;
}

std::string config_digest(const ExperimentConfig& cfg) { return sha1_hex(config_to_json(cfg).dump()); }

}  // namespace dqgp::io
