#include "dqgp/sim/simulator.hpp"

#include <cmath>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp::sim {

void DisturbanceField::validate() const {
  if (!(radius > 0.0)) throw InvalidInput("disturbance radius must be positive");
  if (!center.allFinite() || !std::isfinite(yaw_rate_amp) || !std::isfinite(climb_amp)) {
    throw InvalidInput("disturbance parameters must be finite");
  }
}

Twist disturbance_at(const DisturbanceField& field, const UnitDualQuaternion& q_true) {
  if (!field.enabled) return {};
  double s = 1.0;
  if (!field.always_on) {
    const Vec3 p = dq_to_pose(q_true).position;
    s = std::exp(-(p - field.center).squaredNorm() / (2.0 * field.radius * field.radius));
  }
  return {Vec3(0.0, 0.0, field.yaw_rate_amp * s), Vec3(0.0, 0.0, -field.climb_amp * s)};
}

void SensorModel::validate() const {
  if (!(pose_rate > 0.0) || !(imu_rate > 0.0)) throw InvalidInput("sensor rates must be positive");
  if (!(mag_angle_sigma >= 0.0) || !(pos_sigma >= 0.0) || !(gyro_arw >= 0.0) || !(vel_noise_density >= 0.0)) {
    throw InvalidInput("sensor noise levels must be nonnegative");
  }
}

int SensorModel::pose_stride(double dt) const {
  const double r = 1.0 / (pose_rate * dt);
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * r) {
    std::ostringstream os;
    os << "pose rate " << pose_rate << " Hz is not an integer subsample of the control step " << dt << " s";
    throw InvalidInput(os.str());
  }
  return static_cast<int>(n);
}

SimState SimState::initial(const UnitDualQuaternion& q0, std::uint64_t seed, std::uint64_t sensor_salt) {
  return {0.0, q0, Rng(seed, 1), Rng(seed, 2 + 2 * sensor_salt)};
}

SimState apply_and_step(const SimState& state, const control::VelocityCommand& cmd, const DisturbanceField& field,
                        const SensorModel& noise, double dt, StepInfo* info) {
  SimState next = state;
  const Twist rho = disturbance_at(field, state.Q_true);
  Twist nu;
  if (noise.gyro_arw > 0.0 || noise.vel_noise_density > 0.0) {
    const double root = std::sqrt(dt);
    nu.omega = next.process.normal3() * (noise.gyro_arw / root);
    nu.vel = next.process.normal3() * (noise.vel_noise_density / root);
  }
  const Twist applied{cmd.omega_cmd + rho.omega + nu.omega, cmd.v_cmd + rho.vel + nu.vel};
  next.Q_true = integrate_step(state.Q_true, applied, dt);
  next.t = state.t + dt;
  if (info) *info = {rho, nu, applied};
  return next;
}

UnitDualQuaternion measure_dq(SimState& state, const SensorModel& noise) {
  UnitQuaternion q_rho;
  Vec3 p_rho = Vec3::Zero();
  if (noise.mag_angle_sigma > 0.0) {
    const Vec3 axis = state.sensor.unit_vector();
    q_rho = UnitQuaternion::from_axis_angle(axis, noise.mag_angle_sigma * state.sensor.normal());
  }
  if (noise.pos_sigma > 0.0) p_rho = state.sensor.normal3() * noise.pos_sigma;
  if (noise.mag_angle_sigma == 0.0 && noise.pos_sigma == 0.0) return state.Q_true;
  return state.Q_true * dq_from_pose(Pose{q_rho, p_rho});
}

Pose measure(SimState& state, const SensorModel& noise) { return dq_to_pose(measure_dq(state, noise)); }

}  // namespace dqgp::sim
