#pragma once

#include <array>

#include "dqgp/dq/quaternion.hpp"

namespace dqgp {

/// Q = real + ε dual with ε² = 0. Flat order is (real, dual), each (v, s).
struct DualQuaternion {
  Quaternion real;
  Quaternion dual;

  DualQuaternion() = default;
  DualQuaternion(const Quaternion& r, const Quaternion& d) : real(r), dual(d) {}

  static DualQuaternion identity() { return {Quaternion::identity(), Quaternion::zero()}; }
  static DualQuaternion zero() { return {}; }
  static DualQuaternion from_array(const std::array<double, 8>& a);

  std::array<double, 8> to_array() const;
  bool is_finite() const { return real.is_finite() && dual.is_finite(); }

  DualQuaternion operator-() const { return {-real, -dual}; }
  DualQuaternion& operator+=(const DualQuaternion& o) {
    real += o.real;
    dual += o.dual;
    return *this;
  }
  DualQuaternion& operator*=(double k) {
    real *= k;
    dual *= k;
    return *this;
  }
};

/// real = A.real∘B.real, dual = A.real∘B.dual + A.dual∘B.real.
DualQuaternion dq_mul(const DualQuaternion& a, const DualQuaternion& b);

/// Componentwise quaternion conjugate of both parts.
inline DualQuaternion dq_conj(const DualQuaternion& q) {
  return {quat_conj(q.real), quat_conj(q.dual)};
}

inline DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b) { return dq_mul(a, b); }
inline DualQuaternion operator+(DualQuaternion a, const DualQuaternion& b) { return a += b; }
inline DualQuaternion operator*(DualQuaternion a, double k) { return a *= k; }
inline DualQuaternion operator*(double k, DualQuaternion a) { return a *= k; }

/// Unit dual quaternion: ‖P(Q)‖ = 1 and P∘D* + D∘P* = 0, both within 1e-9.
class UnitDualQuaternion {
 public:
  static constexpr double kTolerance = 1e-9;

  UnitDualQuaternion() : q_(DualQuaternion::identity()) {}

  /// Throws NonUnitInput if either invariant is violated beyond kTolerance.
  static UnitDualQuaternion checked(const DualQuaternion& q);
  /// Scales Q by 1/‖P‖, then removes the component of D along P
  /// (D ← D - ½(P∘D* + D∘P*)∘P).
  static UnitDualQuaternion project(const DualQuaternion& q);
  /// Q = q + ε ½ (p, 0)∘q.
  static UnitDualQuaternion from_parts(const UnitQuaternion& q, const Vec3& p);

  const DualQuaternion& dq() const { return q_; }
  const Quaternion& real() const { return q_.real; }
  const Quaternion& dual() const { return q_.dual; }
  UnitQuaternion attitude() const { return UnitQuaternion::checked(q_.real); }

  UnitDualQuaternion conj() const { return UnitDualQuaternion(dq_conj(q_)); }
  UnitDualQuaternion operator-() const { return UnitDualQuaternion(-q_); }
  UnitDualQuaternion operator*(const UnitDualQuaternion& o) const;

  /// max of |‖P‖ - 1| and the largest component of P∘D* + D∘P*.
  static double unit_residual(const DualQuaternion& q);

 private:
  explicit UnitDualQuaternion(const DualQuaternion& q) : q_(q) {}
  DualQuaternion q_;
};

}  // namespace dqgp
