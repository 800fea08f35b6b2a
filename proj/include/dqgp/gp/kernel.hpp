#pragma once

#include <Eigen/Core>

#include "dqgp/dq/dual_quaternion.hpp"

namespace dqgp::gp {

/// S3 inputs are unit quaternions stored (x, y, z, w); SE3 inputs are unit
/// dual quaternions stored (real, dual).
enum class InputSpace { S3, SE3 };

inline int input_dim(InputSpace s) { return s == InputSpace::S3 ? 4 : 8; }
const char* to_string(InputSpace s);
InputSpace input_space_from_string(const std::string& s);

using Input = Eigen::VectorXd;

Input make_input(const UnitQuaternion& q);
Input make_input(const UnitDualQuaternion& q);

/// Chordal: d±² = min(‖q - q′‖², ‖q + q′‖²). Projective: 1 - ⟨q, q′⟩², which
/// agrees with d±² to leading order near d = 0 and keeps the SE kernel
/// positive definite on all of S3. The chordal form is only guaranteed
/// positive definite when every pair of inputs is less than 180° apart.
enum class RotationDistance { Chordal, Projective };

struct KernelConfig {
  double sigma_f2 = 1.0;
  double ell = 1.0;
  double lambda = 1.0;  // metres per radian-equivalent, SE3 only
  // Optional per-block length-scales. When set, exp(-(d±²/ℓ_rot² +
  // ‖Δp‖²/(λ² ℓ_trans²))/2) replaces the isotropic form.
  bool ard = false;
  double ell_rot = 1.0;
  double ell_trans = 1.0;
  RotationDistance rotation = RotationDistance::Chordal;

  void validate() const;
};

/// min(‖q - q′‖, ‖q + q′‖), i.e. √(2 - 2|⟨q, q′⟩|) for unit inputs.
double chordal_dist(const Eigen::Vector4d& q, const Eigen::Vector4d& q2);

/// √(d±(q, q′)² + ‖p - p′‖²/λ²).
double se3_dist(const Eigen::Matrix<double, 8, 1>& a, const Eigen::Matrix<double, 8, 1>& b, double lambda);

/// Pre-split form of an input: the rotation part and, for SE3, the position.
struct Feature {
  Eigen::Vector4d q = Eigen::Vector4d::Zero();
  Vec3 p = Vec3::Zero();
};

Feature make_feature(InputSpace space, const Input& x);

double kernel_eval(const KernelConfig& cfg, InputSpace space, const Feature& a, const Feature& b);
double kernel_eval(const KernelConfig& cfg, InputSpace space, const Input& a, const Input& b);

}  // namespace dqgp::gp
