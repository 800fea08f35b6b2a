#include "dqgp/dq/dual_quaternion.hpp"

#include <algorithm>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp {

DualQuaternion DualQuaternion::from_array(const std::array<double, 8>& a) {
  return {Quaternion(Vec3(a[0], a[1], a[2]), a[3]), Quaternion(Vec3(a[4], a[5], a[6]), a[7])};
}

std::array<double, 8> DualQuaternion::to_array() const {
  return {real.v.x(), real.v.y(), real.v.z(), real.s, dual.v.x(), dual.v.y(), dual.v.z(), dual.s};
}

DualQuaternion dq_mul(const DualQuaternion& a, const DualQuaternion& b) {
  return {quat_mul(a.real, b.real), quat_mul(a.real, b.dual) + quat_mul(a.dual, b.real)};
}

double UnitDualQuaternion::unit_residual(const DualQuaternion& q) {
  const Quaternion cross = quat_mul(q.real, quat_conj(q.dual)) + quat_mul(q.dual, quat_conj(q.real));
  const double c = std::max({std::abs(cross.v.x()), std::abs(cross.v.y()), std::abs(cross.v.z()),
                             std::abs(cross.s)});
  return std::max(std::abs(q.real.norm() - 1.0), c);
}

UnitDualQuaternion UnitDualQuaternion::checked(const DualQuaternion& q) {
  if (!q.is_finite()) {
    throw NonUnitInput("dual quaternion has non-finite components");
  }
  const double r = unit_residual(q);
  if (r > kTolerance) {
    std::ostringstream os;
    os << "dual quaternion violates unit invariants by " << r << " (tolerance " << kTolerance << ")";
    throw NonUnitInput(os.str());
  }
  return UnitDualQuaternion(q);
}

UnitDualQuaternion UnitDualQuaternion::project(const DualQuaternion& q) {
  const double n = q.real.norm();
  if (!q.is_finite() || !(n > 0.0)) {
    throw NonUnitInput("cannot project a dual quaternion with zero or non-finite real part");
  }
  DualQuaternion u = q * (1.0 / n);
  // For unit P, P∘D* + D∘P* = (0, 2⟨P, D⟩).
  const Quaternion cross = quat_mul(u.real, quat_conj(u.dual)) + quat_mul(u.dual, quat_conj(u.real));
  u.dual -= quat_mul(cross * 0.5, u.real);
  return UnitDualQuaternion(u);
}

UnitDualQuaternion UnitDualQuaternion::from_parts(const UnitQuaternion& q, const Vec3& p) {
  return UnitDualQuaternion(DualQuaternion(q.quat(), quat_mul(pure(p), q.quat()) * 0.5));
}

UnitDualQuaternion UnitDualQuaternion::operator*(const UnitDualQuaternion& o) const {
  return project(dq_mul(q_, o.q_));
}

}  // namespace dqgp
