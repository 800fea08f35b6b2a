#pragma once

#include <string>
#include <vector>

#include "dqgp/dq/kinematics.hpp"

namespace dqgp::sim {

enum class Shape { Lemniscate, Circle, Spiral };
enum class SpeedProfile { Constant, LinearlyDecreasing };

const char* to_string(Shape s);
Shape shape_from_string(const std::string& s);
const char* to_string(SpeedProfile p);
SpeedProfile speed_profile_from_string(const std::string& s);

/// Horizontal curve traversed at a prescribed path speed, with yaw aligned
/// to the horizontal velocity and zero roll/pitch.
///   lemniscate (Gerono): (A sin θ, A sin θ cos θ, h)
///   circle:              (A cos θ, A sin θ, h)
///   spiral:              circle with h(t) = base_height + climb_rate·t
struct ReferenceTrajectory {
  Shape shape = Shape::Lemniscate;
  double amplitude = 4.0;
  double base_height = 2.0;
  double duration = 40.0;
  SpeedProfile speed_profile = SpeedProfile::Constant;
  double v0 = 1.0;  // path speed at t = 0 (m/s)
  double v1 = 1.0;  // path speed at t = duration, decreasing profile only
  double climb_rate = 0.0;  // spiral only (m/s)

  void validate() const;
  /// Horizontal arc length covered by time t.
  double arc_length(double t) const;
  double path_speed(double t) const;
  double path_accel() const;
};

struct ReferenceSample {
  UnitDualQuaternion Q_d;
  Twist tw_d;
  Pose pose;
  Vec3 accel = Vec3::Zero();
  double yaw = 0.0;
};

/// Precomputes the arc-length table once; evaluation is then cheap and
/// thread-safe.
class Reference {
 public:
  explicit Reference(ReferenceTrajectory traj);

  const ReferenceTrajectory& trajectory() const { return traj_; }
  /// Throws OutOfRange unless 0 ≤ t ≤ duration (1e-9 s slack).
  ReferenceSample at(double t) const;
  /// Curve parameter θ reached after horizontal arc length s.
  double theta_of_arc(double s) const;
  /// ∫₀^θ ‖p′‖ dθ′.
  double arc_of_theta(double theta) const;

 private:
  ReferenceTrajectory traj_;
  double period_arc_ = 0.0;
  std::vector<double> table_;  // arc length at θ_i = i·2π/n over one period
};

ReferenceSample reference_at(const Reference& ref, double t);

}  // namespace dqgp::sim
