#pragma once

// Quaternions are stored as (vector, scalar): q = (v, s) with v in R^3.
// Every flat array produced or consumed by this library uses the order
// (v.x, v.y, v.z, s).

#include <array>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dqgp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Skew-symmetric matrix with skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& a);

struct Quaternion {
  Vec3 v = Vec3::Zero();
  double s = 0.0;

  Quaternion() = default;
  Quaternion(const Vec3& vec, double scalar) : v(vec), s(scalar) {}

  static Quaternion identity() { return {Vec3::Zero(), 1.0}; }
  static Quaternion zero() { return {}; }
  /// Reads (vx, vy, vz, s).
  static Quaternion from_array(const std::array<double, 4>& a) {
    return {Vec3(a[0], a[1], a[2]), a[3]};
  }

  std::array<double, 4> to_array() const { return {v.x(), v.y(), v.z(), s}; }

  double squared_norm() const { return v.squaredNorm() + s * s; }
  double norm() const { return std::sqrt(squared_norm()); }
  double dot(const Quaternion& o) const { return v.dot(o.v) + s * o.s; }
  bool is_finite() const { return v.allFinite() && std::isfinite(s); }

  Quaternion operator-() const { return {-v, -s}; }
  Quaternion& operator+=(const Quaternion& o) {
    v += o.v;
    s += o.s;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    v -= o.v;
    s -= o.s;
    return *this;
  }
  Quaternion& operator*=(double k) {
    v *= k;
    s *= k;
    return *this;
  }
};

/// Hamilton product in block-matrix form:
///   p∘q = [S(p.v) + I p.s, p.v; -p.vᵀ, p.s] (q.v, q.s)
Quaternion quat_mul(const Quaternion& p, const Quaternion& q);

/// (v, s)* = (-v, s)
inline Quaternion quat_conj(const Quaternion& q) { return {-q.v, q.s}; }

inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }
inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator*(Quaternion a, double k) { return a *= k; }
inline Quaternion operator*(double k, Quaternion a) { return a *= k; }

/// Quaternion with zero scalar part, identified with a vector of R^3.
struct PureQuaternion {
  Vec3 v = Vec3::Zero();

  PureQuaternion() = default;
  explicit PureQuaternion(const Vec3& vec) : v(vec) {}
  operator Quaternion() const { return {v, 0.0}; }  // NOLINT(google-explicit-constructor)
};

/// Embeds a 3-vector as the pure quaternion (x, 0).
inline Quaternion pure(const Vec3& x) { return {x, 0.0}; }

/// Element of the unit 3-sphere. The norm invariant |‖q‖ - 1| ≤ 1e-9 holds
/// for every instance.
class UnitQuaternion {
 public:
  static constexpr double kTolerance = 1e-9;

  UnitQuaternion() : q_(Quaternion::identity()) {}

  /// Throws NonUnitInput when q is off the sphere by more than kTolerance.
  static UnitQuaternion checked(const Quaternion& q);
  /// Divides by the norm; throws NonUnitInput for a zero or non-finite q.
  static UnitQuaternion normalized(const Quaternion& q);
  /// Rotation of `angle` radians about `axis` (normalized internally).
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  /// Rotation about the inertial z axis.
  static UnitQuaternion from_yaw(double yaw);

  const Quaternion& quat() const { return q_; }
  const Vec3& vec() const { return q_.v; }
  double scalar() const { return q_.s; }

  UnitQuaternion conj() const { return UnitQuaternion(quat_conj(q_)); }
  UnitQuaternion operator-() const { return UnitQuaternion(-q_); }
  UnitQuaternion operator*(const UnitQuaternion& o) const;

  /// Rotation angle in [0, 2π] of this representative.
  double angle() const;

 private:
  explicit UnitQuaternion(const Quaternion& q) : q_(q) {}
  Quaternion q_;
};

/// Sandwich product q ∘ (x, 0) ∘ q*, vector part.
Vec3 rotate_vector(const UnitQuaternion& q, const Vec3& x);

/// R(q) = (s² - vᵀv) I + 2 v vᵀ + 2 s S(v).
Mat3 rotation_matrix(const UnitQuaternion& q);

/// Rotation vector (axis * angle) of q, taking the shortest representative
/// of ±q, so the result has norm ≤ π.
Vec3 rotation_vector(const UnitQuaternion& q);

}  // namespace dqgp
