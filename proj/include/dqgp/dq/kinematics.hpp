#pragma once

#include "dqgp/dq/dual_quaternion.hpp"

namespace dqgp {

/// Attitude (body to inertial) and inertial position in metres.
struct Pose {
  UnitQuaternion attitude;
  Vec3 position = Vec3::Zero();
};

/// Body angular velocity (rad/s) and inertial linear velocity (m/s).
struct Twist {
  Vec3 omega = Vec3::Zero();
  Vec3 vel = Vec3::Zero();

  bool is_finite() const { return omega.allFinite() && vel.allFinite(); }
};

UnitDualQuaternion dq_from_pose(const Pose& pose);

/// attitude = P(Q), position = vec(2 D(Q)∘P(Q)*). Both unit invariants are
/// re-checked, so a hand-built Q off the manifold throws NonUnitInput.
Pose dq_to_pose(const UnitDualQuaternion& q);
Pose dq_to_pose(const DualQuaternion& q);

/// Ω with P(Ω) = (ω, 0) and D(Ω) = P(Q)*∘(v, 0)∘P(Q).
DualQuaternion twist_dq(const UnitDualQuaternion& q, const Twist& tw);

/// Q̇ = ½ Q∘Ω. Accepts non-unit Q so that Runge-Kutta stages can call it.
DualQuaternion dq_derivative(const DualQuaternion& q, const Twist& tw);
inline DualQuaternion dq_derivative(const UnitDualQuaternion& q, const Twist& tw) {
  return dq_derivative(q.dq(), tw);
}

/// δQ = Q_d*∘Q with the cached components used by the controller.
///
/// dq_vec/dq0 are the vector and scalar parts of δq̄ = q_d*∘q.
/// dp_inertial = p - p_d, dp_body = q_d*∘δp̃∘q_d (desired frame), and
/// D(δQ) = ½ δp̃ᵇ∘δq̄. The desired attitude is kept because the
/// error dynamics need it to move between frames.
struct PoseError {
  UnitDualQuaternion dQ;
  Vec3 dq_vec = Vec3::Zero();
  double dq0 = 1.0;
  Vec3 dp_inertial = Vec3::Zero();
  Vec3 dp_body = Vec3::Zero();
  UnitQuaternion desired_attitude;

  UnitQuaternion attitude_error() const { return UnitQuaternion::checked(dQ.real()); }
};

PoseError pose_error(const UnitDualQuaternion& desired, const UnitDualQuaternion& actual);

/// Rebuilds the cached components from δQ and q_d alone.
PoseError pose_error_from_delta(const UnitDualQuaternion& delta, const UnitQuaternion& desired_attitude);

/// δΩ of the error dynamics:
///   P(δΩ) = ω̃ - δq̄*∘ω̃_d∘δq̄,
///   D(δΩ) = δq̄*∘(d/dt δp̃ᵇ)∘δq̄,
/// with d/dt δp̃ᵇ expanded by the product rule on q_d*∘δp̃∘q_d.
DualQuaternion error_twist(const PoseError& err, const Twist& tw, const Twist& tw_d);

/// Same δΩ with the dual part written for an inertial error velocity:
///   D(δΩ) = δq̄*∘(S(δpᵇ)ω_d, 0)∘δq̄ + q*∘δṽ∘q.
DualQuaternion error_twist_inertial(const PoseError& err, const Twist& tw, const Twist& tw_d);

/// d/dt δQ = ½ δQ∘δΩ.
DualQuaternion error_derivative(const PoseError& err, const Twist& tw, const Twist& tw_d);

/// Classic RK4 stage combination for dual-quaternion valued ODEs.
template <typename Deriv>
DualQuaternion rk4_increment(const DualQuaternion& y, double h, Deriv&& f) {
  const DualQuaternion k1 = f(y, 0.0);
  const DualQuaternion k2 = f(y + k1 * (0.5 * h), 0.5 * h);
  const DualQuaternion k3 = f(y + k2 * (0.5 * h), 0.5 * h);
  const DualQuaternion k4 = f(y + k3 * h, h);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

inline constexpr double kMaxStep = 0.1;

/// One RK4 step of Q̇ = ½ Q∘Ω under a constant twist, followed by
/// projection onto the unit dual quaternions. Throws StepTooLarge for
/// dt > 0.1 s and InvalidInput for dt ≤ 0.
UnitDualQuaternion integrate_step(const UnitDualQuaternion& q, const Twist& tw, double dt);

}  // namespace dqgp
