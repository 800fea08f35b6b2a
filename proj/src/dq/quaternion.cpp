#include "dqgp/dq/quaternion.hpp"

#include <algorithm>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp {

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return m;
}

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
  return {p.v.cross(q.v) + p.s * q.v + q.s * p.v, p.s * q.s - p.v.dot(q.v)};
}

UnitQuaternion UnitQuaternion::checked(const Quaternion& q) {
  const double n = q.norm();
  if (!q.is_finite() || std::abs(n - 1.0) > kTolerance) {
    std::ostringstream os;
    os << "quaternion norm " << n << " is not unit (tolerance " << kTolerance << ")";
    throw NonUnitInput(os.str());
  }
  return UnitQuaternion(q);
}

UnitQuaternion UnitQuaternion::normalized(const Quaternion& q) {
  const double n = q.norm();
  if (!q.is_finite() || !(n > 0.0)) {
    throw NonUnitInput("cannot normalize a zero or non-finite quaternion");
  }
  return UnitQuaternion(q * (1.0 / n));
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    return UnitQuaternion();
  }
  const double h = 0.5 * angle;
  return UnitQuaternion(Quaternion(axis * (std::sin(h) / n), std::cos(h)));
}

UnitQuaternion UnitQuaternion::from_yaw(double yaw) {
  const double h = 0.5 * yaw;
  return UnitQuaternion(Quaternion(Vec3(0.0, 0.0, std::sin(h)), std::cos(h)));
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  // Products of unit quaternions drift by O(eps); renormalizing keeps the
  // invariant exact to rounding.
  return normalized(quat_mul(q_, o.q_));
}

double UnitQuaternion::angle() const {
  return 2.0 * std::atan2(q_.v.norm(), q_.s);
}

Vec3 rotate_vector(const UnitQuaternion& q, const Vec3& x) {
  const Quaternion& r = q.quat();
  return quat_mul(quat_mul(r, pure(x)), quat_conj(r)).v;
}

Mat3 rotation_matrix(const UnitQuaternion& q) {
  const Vec3& v = q.vec();
  const double s = q.scalar();
  return (s * s - v.dot(v)) * Mat3::Identity() + 2.0 * v * v.transpose() + 2.0 * s * skew(v);
}

Vec3 rotation_vector(const UnitQuaternion& q) {
  Vec3 v = q.vec();
  double s = q.scalar();
  if (s < 0.0) {
    v = -v;
    s = -s;
  }
  const double vn = v.norm();
  if (vn < 1e-300) {
    return Vec3::Zero();
  }
  const double angle = 2.0 * std::atan2(vn, s);
  return v * (angle / vn);
}

}  // namespace dqgp
