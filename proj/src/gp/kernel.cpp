#include "dqgp/gp/kernel.hpp"

#include <cmath>

#include "dqgp/errors.hpp"

namespace dqgp::gp {

const char* to_string(InputSpace s) { return s == InputSpace::S3 ? "S3" : "SE3"; }

InputSpace input_space_from_string(const std::string& s) {
  if (s == "S3") return InputSpace::S3;
  if (s == "SE3") return InputSpace::SE3;
  throw InvalidInput("unknown input space '" + s + "'");
}

Input make_input(const UnitQuaternion& q) {
  const auto a = q.quat().to_array();
  return Eigen::Map<const Eigen::Vector4d>(a.data());
}

Input make_input(const UnitDualQuaternion& q) {
  const auto a = q.dq().to_array();
  return Eigen::Map<const Eigen::Matrix<double, 8, 1>>(a.data());
}

void KernelConfig::validate() const {
  if (!(sigma_f2 > 0.0) || !(ell > 0.0) || !(lambda > 0.0) || !(ell_rot > 0.0) || !(ell_trans > 0.0) ||
      !std::isfinite(sigma_f2) || !std::isfinite(ell) || !std::isfinite(lambda)) {
    throw InvalidInput("kernel hyperparameters must be finite and strictly positive");
  }
}

namespace {

double chordal_sq(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return std::min((a - b).squaredNorm(), (a + b).squaredNorm());
}

}  // namespace

double chordal_dist(const Eigen::Vector4d& q, const Eigen::Vector4d& q2) { return std::sqrt(chordal_sq(q, q2)); }

Feature make_feature(InputSpace space, const Input& x) {
  Feature f;
  f.q = x.head<4>();
  if (space == InputSpace::SE3) {
    const Quaternion real(x.segment<3>(0), x(3));
    const Quaternion dual(x.segment<3>(4), x(7));
    f.p = (quat_mul(dual, quat_conj(real)) * 2.0).v;
  }
  return f;
}

double se3_dist(const Eigen::Matrix<double, 8, 1>& a, const Eigen::Matrix<double, 8, 1>& b, double lambda) {
  const Feature fa = make_feature(InputSpace::SE3, a), fb = make_feature(InputSpace::SE3, b);
  return std::sqrt(chordal_sq(fa.q, fb.q) + (fa.p - fb.p).squaredNorm() / (lambda * lambda));
}

double kernel_eval(const KernelConfig& cfg, InputSpace space, const Feature& a, const Feature& b) {
  double rot;
  if (cfg.rotation == RotationDistance::Chordal) {
    rot = chordal_sq(a.q, b.q);
  } else {
    const double c = a.q.dot(b.q);
    rot = std::max(0.0, 1.0 - c * c);
  }
  const double trans = space == InputSpace::SE3 ? (a.p - b.p).squaredNorm() / (cfg.lambda * cfg.lambda) : 0.0;
  double r2;
  if (cfg.ard) {
    r2 = rot / (cfg.ell_rot * cfg.ell_rot) + trans / (cfg.ell_trans * cfg.ell_trans);
  } else {
    r2 = (rot + trans) / (cfg.ell * cfg.ell);
  }
  return cfg.sigma_f2 * std::exp(-0.5 * r2);
}

double kernel_eval(const KernelConfig& cfg, InputSpace space, const Input& a, const Input& b) {
  return kernel_eval(cfg, space, make_feature(space, a), make_feature(space, b));
}

}  // namespace dqgp::gp
