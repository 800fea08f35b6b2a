#pragma once

// Random generators and brute-force oracles shared by the unit and
// acceptance suites. Oracles expand everything component by component and
// never call the library's product routines.

#include <array>
#include <cmath>
#include <random>

#include "dqgp/dq/kinematics.hpp"

namespace dqgp::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  Vec3 vec3(double scale = 1.0) { return Vec3(normal(), normal(), normal()) * scale; }
  Vec3 vec3_in_ball(double radius) {
    Vec3 d = vec3();
    d.normalize();
    return d * radius * std::cbrt(uniform(0.0, 1.0));
  }
  Quaternion quat(double scale = 1.0) { return {vec3(scale), normal() * scale}; }
  UnitQuaternion unit_quat() { return UnitQuaternion::normalized(quat()); }
  /// Rotation of at most max_angle about a uniform axis, with a random sign.
  UnitQuaternion unit_quat_cap(double max_angle) {
    const UnitQuaternion q = UnitQuaternion::from_axis_angle(vec3(), uniform(0.0, max_angle));
    return uniform(0.0, 1.0) < 0.5 ? q : -q;
  }
  Pose pose(double pos_scale = 3.0) { return {unit_quat(), vec3(pos_scale)}; }
  UnitDualQuaternion unit_dq(double pos_scale = 3.0) { return dq_from_pose(pose(pos_scale)); }
  DualQuaternion dual_quat() { return {quat(), quat()}; }
  Twist twist(double scale = 1.0) { return {vec3(scale), vec3(scale)}; }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Hamilton product written out term by term, storage (x, y, z, w).
inline std::array<double, 4> brute_mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  const double ax = a[0], ay = a[1], az = a[2], aw = a[3];
  const double bx = b[0], by = b[1], bz = b[2], bw = b[3];
  return {
      aw * bx + ax * bw + ay * bz - az * by,
      aw * by - ax * bz + ay * bw + az * bx,
      aw * bz + ax * by - ay * bx + az * bw,
      aw * bw - ax * bx - ay * by - az * bz,
  };
}

inline std::array<double, 4> brute_conj(const std::array<double, 4>& a) { return {-a[0], -a[1], -a[2], a[3]}; }

inline std::array<double, 4> brute_add(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline std::array<double, 4> brute_scale(const std::array<double, 4>& a, double k) {
  return {a[0] * k, a[1] * k, a[2] * k, a[3] * k};
}

/// (a + εb)(c + εd) = ac + ε(ad + bc), expanded over 8 components.
inline std::array<double, 8> brute_dq_mul(const std::array<double, 8>& x, const std::array<double, 8>& y) {
  const std::array<double, 4> a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
  const std::array<double, 4> c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
  const auto r = brute_mul(a, c);
  const auto du = brute_add(brute_mul(a, d), brute_mul(b, c));
  return {r[0], r[1], r[2], r[3], du[0], du[1], du[2], du[3]};
}

/// Rotation matrix from the explicit (s² - vᵀv) I + 2vvᵀ + 2sS(v) formula.
inline Mat3 brute_rotation(const std::array<double, 4>& q) {
  const double x = q[0], y = q[1], z = q[2], w = q[3];
  const double d = w * w - x * x - y * y - z * z;
  Mat3 r;
  r << d + 2 * x * x, 2 * x * y - 2 * w * z, 2 * x * z + 2 * w * y,
       2 * x * y + 2 * w * z, d + 2 * y * y, 2 * y * z - 2 * w * x,
       2 * x * z - 2 * w * y, 2 * y * z + 2 * w * x, d + 2 * z * z;
  return r;
}

inline double max_abs_diff(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::array<double, 8>& a, const std::array<double, 8>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 8; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const DualQuaternion& a, const DualQuaternion& b) {
  return max_abs_diff(a.to_array(), b.to_array());
}

/// Distance between two poses, treating ±q as the same attitude.
inline double pose_distance(const Pose& a, const Pose& b) {
  const auto qa = a.attitude.quat().to_array();
  const auto qb = b.attitude.quat().to_array();
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(qa[i] - qb[i]));
    minus = std::max(minus, std::abs(qa[i] + qb[i]));
  }
  return std::max(std::min(plus, minus), (a.position - b.position).cwiseAbs().maxCoeff());
}

}  // namespace dqgp::testing
