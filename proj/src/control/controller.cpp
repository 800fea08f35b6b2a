#include "dqgp/control/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "dqgp/errors.hpp"

namespace dqgp::control {

namespace {

double min_eigenvalue(const Mat3& k) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void check_matrix(const Mat3& k, double alpha, const char* name) {
  if (!k.allFinite()) {
    throw InvalidInput(std::string(name) + " has non-finite entries");
  }
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInput(std::string(name) + " is not symmetric");
  }
  if (!(alpha > 0.0)) {
    throw InvalidInput(std::string("lower bound for ") + name + " must be positive");
  }
  const double lmin = min_eigenvalue(k);
  if (lmin < alpha) {
    std::ostringstream os;
    os << name << " has minimum eigenvalue " << lmin << " below its bound " << alpha;
    throw InvalidInput(os.str());
  }
}

}  // namespace

GainSchedule GainSchedule::from_matrices(const Mat3& k_omega, const Mat3& k_v) {
  GainSchedule g{k_omega, k_v, min_eigenvalue(k_omega), min_eigenvalue(k_v)};
  g.validate();
  return g;
}

GainSchedule GainSchedule::diagonal(double k_omega, double k_v) {
  return from_matrices(Mat3::Identity() * k_omega, Mat3::Identity() * k_v);
}

void GainSchedule::validate() const {
  check_matrix(K_omega, alpha_omega, "K_omega");
  check_matrix(K_v, alpha_v, "K_v");
}

ScheduleFn constant_schedule(GainSchedule gains) {
  gains.validate();
  return [gains](double, const PoseError&) { return gains; };
}

VelocityCommand nominal_control(const PoseError& err, const Twist& tw_d, const GainSchedule& gains) {
  const Quaternion& dq = err.dQ.real();
  const Vec3 ff = quat_mul(quat_mul(quat_conj(dq), pure(tw_d.omega)), dq).v;
  VelocityCommand u;
  u.omega_cmd = ff - sign_nonzero(err.dq0) * (gains.K_omega * err.dq_vec);
  u.v_cmd = tw_d.vel - gains.K_v * err.dp_inertial;
  return u;
}

VelocityCommand learned_control(const VelocityCommand& nominal, const Vec3& mu_omega, const Vec3& mu_v) {
  return {nominal.omega_cmd - mu_omega, nominal.v_cmd - mu_v};
}

double lyapunov_V(const PoseError& err) {
  return err.dq_vec.squaredNorm() + 0.5 * err.dp_inertial.squaredNorm();
}

double lyapunov_rate_nominal(const PoseError& err, const GainSchedule& gains) {
  return -std::abs(err.dq0) * err.dq_vec.dot(gains.K_omega * err.dq_vec) -
         err.dp_inertial.dot(gains.K_v * err.dp_inertial);
}

WorstCase worst_case_constants(double max_rho_omega, double max_rho_v, const GainSchedule& gains) {
  return {max_rho_omega, max_rho_v * max_rho_v / (2.0 * gains.alpha_v)};
}

namespace {

// With u = ‖δq⃗‖ and δq₀² = 1 - u², membership in the set reads
// g(u) + ‖δp‖² ≤ ε₀, and V is largest with ‖δp‖² = ε₀ - g(u).
double g_of(double u) { return std::sqrt(std::max(0.0, 1.0 - u * u)) * u * u; }
double v_of(double u, double eps0) { return u * u + 0.5 * (eps0 - g_of(u)); }

// g rises on [0, √(2/3)] and falls afterwards.
const double kPeakU = std::sqrt(2.0 / 3.0);

}  // namespace

std::pair<double, double> max_lyapunov_on_sublevel(double eps0) {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) {
    throw InvalidInput("eps0 must be finite and nonnegative");
  }
  const double m_full = 1.0 + 0.5 * eps0;

  // Upper end of the component containing u = 0.
  double u_hi = 1.0;
  if (g_of(kPeakU) > eps0) {
    double lo = 0.0, hi = kPeakU;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g_of(mid) <= eps0 ? lo : hi) = mid;
    }
    u_hi = lo;
  }

  constexpr double kStep = 1e-3;
  double best = v_of(u_hi, eps0);
  double best_u = u_hi;
  const int n = static_cast<int>(std::floor(u_hi / kStep));
  for (int i = 0; i <= n; ++i) {
    const double u = i * kStep;
    const double val = v_of(u, eps0);
    if (val > best) {
      best = val;
      best_u = u;
    }
  }
  // Golden-section refinement around the best grid point.
  double a = std::max(0.0, best_u - kStep), b = std::min(u_hi, best_u + kStep);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 60; ++i) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (v_of(c, eps0) > v_of(d, eps0)) {
      b = d;
    } else {
      a = c;
    }
  }
  best = std::max(best, v_of(0.5 * (a + b), eps0));
  return {best, m_full};
}

UltimateBound ultimate_bound(double c_omega, double c_v, const GainSchedule& gains, double gamma_omega,
                             double gamma_v) {
  if (!(c_omega >= 0.0) || !(c_v >= 0.0)) {
    throw InvalidInput("worst-case constants must be nonnegative");
  }
  if (!(gamma_omega > 0.0 && gamma_omega <= 1.0) || !(gamma_v > 0.0 && gamma_v <= 1.0)) {
    throw InvalidConfidence("confidence levels must lie in (0, 1]");
  }
  UltimateBound b;
  b.c_omega = c_omega;
  b.c_v = c_v;
  b.alpha_n = gains.alpha_n();
  b.eps0 = (c_omega + c_v) / b.alpha_n;
  std::tie(b.M, b.M_full) = max_lyapunov_on_sublevel(b.eps0);
  b.gamma = std::min(gamma_omega, gamma_v);
  return b;
}

}  // namespace dqgp::control
