#pragma once

#include <cstdint>

#include "dqgp/control/controller.hpp"
#include "dqgp/sim/rng.hpp"

namespace dqgp::sim {

/// Yaw-rate and sink-rate disturbance around a point,
///   s = exp(-‖p - center‖² / (2 radius²))   (s = 1 when always_on),
///   ρ_ω = (0, 0, yaw_rate_amp·s) body,  ρ_v = (0, 0, -climb_amp·s) inertial.
struct DisturbanceField {
  bool enabled = true;
  Vec3 center = Vec3(0.0, 0.0, 2.0);
  double radius = 1.0;
  double yaw_rate_amp = 0.3;
  double climb_amp = 0.5;
  bool always_on = false;

  void validate() const;
};

Twist disturbance_at(const DisturbanceField& field, const UnitDualQuaternion& q_true);

/// Sensor and process-noise model.
///   Pose measurements arrive at pose_rate: Q_meas = Q∘Q_ρ with Q_ρ a rotation
///   of N(0, mag_angle_sigma²) about a uniform axis and a body-frame offset
///   N(0, pos_sigma² I).
///   The applied twist carries white noise with per-step standard deviations
///   gyro_arw/√dt (rad/s) and vel_noise_density/√dt (m/s).
struct SensorModel {
  double mag_angle_sigma = 0.5 * 3.14159265358979323846 / 180.0;  // rad
  double pos_sigma = 0.5;                                          // m
  double gyro_arw = 1.0 * 3.14159265358979323846 / 180.0 / 60.0;  // rad/√s (1 deg/√h)
  double vel_noise_density = 0.005;                                // m/s/√s
  double pose_rate = 5.0;                                          // Hz
  double imu_rate = 300.0;                                         // Hz
  /// Salt for the sensor stream; episodes with equal seeds but different
  /// salts share process noise and differ in measurement noise.
  std::uint64_t seed = 0;

  void validate() const;
  /// Control steps per pose measurement, requiring an integer ratio.
  int pose_stride(double dt) const;
  bool noiseless() const {
    return mag_angle_sigma == 0.0 && pos_sigma == 0.0 && gyro_arw == 0.0 && vel_noise_density == 0.0;
  }
};

/// True state plus the two random streams (process noise and sensor noise).
struct SimState {
  double t = 0.0;
  UnitDualQuaternion Q_true;
  Rng process;
  Rng sensor;

  static SimState initial(const UnitDualQuaternion& q0, std::uint64_t seed, std::uint64_t sensor_salt = 0);
};

struct StepInfo {
  Twist disturbance;
  Twist noise;
  Twist applied;
};

/// Applied twist = cmd + ρ(Q_true) + ν, then one integrate_step.
SimState apply_and_step(const SimState& state, const control::VelocityCommand& cmd, const DisturbanceField& field,
                        const SensorModel& noise, double dt, StepInfo* info = nullptr);

/// Draws Q_ρ from the sensor stream and returns Q_true∘Q_ρ.
UnitDualQuaternion measure_dq(SimState& state, const SensorModel& noise);
Pose measure(SimState& state, const SensorModel& noise);

}  // namespace dqgp::sim
