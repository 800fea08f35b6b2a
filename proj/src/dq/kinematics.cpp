#include "dqgp/dq/kinematics.hpp"

#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp {

UnitDualQuaternion dq_from_pose(const Pose& pose) {
  return UnitDualQuaternion::from_parts(pose.attitude, pose.position);
}

Pose dq_to_pose(const UnitDualQuaternion& q) {
  const Quaternion p = quat_mul(q.dual(), quat_conj(q.real())) * 2.0;
  return {q.attitude(), p.v};
}

Pose dq_to_pose(const DualQuaternion& q) { return dq_to_pose(UnitDualQuaternion::checked(q)); }

namespace {

DualQuaternion twist_dq_raw(const Quaternion& real, const Twist& tw) {
  return {pure(tw.omega), quat_mul(quat_mul(quat_conj(real), pure(tw.vel)), real)};
}

}  // namespace

DualQuaternion twist_dq(const UnitDualQuaternion& q, const Twist& tw) {
  return twist_dq_raw(q.real(), tw);
}

DualQuaternion dq_derivative(const DualQuaternion& q, const Twist& tw) {
  return dq_mul(q, twist_dq_raw(q.real, tw)) * 0.5;
}

PoseError pose_error(const UnitDualQuaternion& desired, const UnitDualQuaternion& actual) {
  const UnitDualQuaternion delta = desired.conj() * actual;
  PoseError e = pose_error_from_delta(delta, desired.attitude());
  // The inertial difference is taken from the poses themselves rather than
  // rotated back from δpᵇ.
  e.dp_inertial = dq_to_pose(actual).position - dq_to_pose(desired).position;
  return e;
}

PoseError pose_error_from_delta(const UnitDualQuaternion& delta, const UnitQuaternion& desired_attitude) {
  PoseError e;
  e.dQ = delta;
  e.dq_vec = delta.real().v;
  e.dq0 = delta.real().s;
  e.dp_body = (quat_mul(delta.dual(), quat_conj(delta.real())) * 2.0).v;
  e.dp_inertial = rotate_vector(desired_attitude, e.dp_body);
  e.desired_attitude = desired_attitude;
  return e;
}

DualQuaternion error_twist(const PoseError& err, const Twist& tw, const Twist& tw_d) {
  const Quaternion& dq = err.dQ.real();
  const Quaternion dq_c = quat_conj(dq);
  const Quaternion w_d = pure(tw_d.omega);
  const Quaternion dpb = pure(err.dp_body);
  const Quaternion& qd = err.desired_attitude.quat();

  const Quaternion principal = pure(tw.omega) - quat_mul(quat_mul(dq_c, w_d), dq);
  // d/dt (q_d*∘δp̃∘q_d) with q̇_d = ½ q_d∘ω̃_d.
  const Quaternion dpb_dot = quat_mul(w_d, dpb) * -0.5 + quat_mul(dpb, w_d) * 0.5 +
                             quat_mul(quat_mul(quat_conj(qd), pure(tw.vel - tw_d.vel)), qd);
  const Quaternion dual = quat_mul(quat_mul(dq_c, dpb_dot), dq);
  return {principal, dual};
}

DualQuaternion error_twist_inertial(const PoseError& err, const Twist& tw, const Twist& tw_d) {
  const Quaternion& dq = err.dQ.real();
  const Quaternion dq_c = quat_conj(dq);
  const Quaternion q = quat_mul(err.desired_attitude.quat(), dq);

  const Quaternion principal = pure(tw.omega) - quat_mul(quat_mul(dq_c, pure(tw_d.omega)), dq);
  const Quaternion rot_term = quat_mul(quat_mul(dq_c, pure(skew(err.dp_body) * tw_d.omega)), dq);
  const Quaternion vel_term = quat_mul(quat_mul(quat_conj(q), pure(tw.vel - tw_d.vel)), q);
  return {principal, rot_term + vel_term};
}

DualQuaternion error_derivative(const PoseError& err, const Twist& tw, const Twist& tw_d) {
  return dq_mul(err.dQ.dq(), error_twist(err, tw, tw_d)) * 0.5;
}

UnitDualQuaternion integrate_step(const UnitDualQuaternion& q, const Twist& tw, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidInput("integration step must be positive");
  }
  if (dt > kMaxStep) {
    std::ostringstream os;
    os << "integration step " << dt << " s exceeds " << kMaxStep << " s";
    throw StepTooLarge(os.str());
  }
  const DualQuaternion next =
      rk4_increment(q.dq(), dt, [&tw](const DualQuaternion& y, double) { return dq_derivative(y, tw); });
  return UnitDualQuaternion::project(next);
}

}  // namespace dqgp
