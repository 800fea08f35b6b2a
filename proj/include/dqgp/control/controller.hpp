#pragma once

#include <algorithm>
#include <functional>
#include <utility>

#include "dqgp/dq/kinematics.hpp"

namespace dqgp::control {

/// Feedback gains with their uniform lower bounds K ⪰ αI.
struct GainSchedule {
  Mat3 K_omega = Mat3::Identity();
  Mat3 K_v = Mat3::Identity();
  double alpha_omega = 1.0;
  double alpha_v = 1.0;

  /// alpha_* are set to the smallest eigenvalue of each matrix.
  static GainSchedule from_matrices(const Mat3& k_omega, const Mat3& k_v);
  static GainSchedule diagonal(double k_omega, double k_v);

  /// Throws InvalidInput on asymmetric matrices (beyond 1e-12), α ≤ 0, or
  /// λ_min(K) < α.
  void validate() const;

  double alpha_n() const { return 0.5 * std::min(alpha_omega, alpha_v); }
};

/// Time/state dependent gains. Only constant schedules are used in practice.
using ScheduleFn = std::function<GainSchedule(double t, const PoseError& err)>;
ScheduleFn constant_schedule(GainSchedule gains);

struct VelocityCommand {
  Vec3 omega_cmd = Vec3::Zero();  // body, rad/s
  Vec3 v_cmd = Vec3::Zero();      // inertial, m/s

  bool is_finite() const { return omega_cmd.allFinite() && v_cmd.allFinite(); }
  Twist twist() const { return {omega_cmd, v_cmd}; }
};

/// sign() with sign(0) = +1.
inline double sign_nonzero(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// ω = vec(δq̄*∘ω̃_d∘δq̄) - sign(δq₀) K_ω δq⃗,  v = v_d - K_v δp (δp inertial).
VelocityCommand nominal_control(const PoseError& err, const Twist& tw_d, const GainSchedule& gains);

/// Subtracts the GP mean estimates of the disturbance.
VelocityCommand learned_control(const VelocityCommand& nominal, const Vec3& mu_omega, const Vec3& mu_v);

/// V = ‖δq⃗‖² + ½‖δp‖².
double lyapunov_V(const PoseError& err);

/// V̇ along the undisturbed nominal loop: -|δq₀| δq⃗ᵀK_ω δq⃗ - δpᵀK_v δp.
double lyapunov_rate_nominal(const PoseError& err, const GainSchedule& gains);

struct WorstCase {
  double c_omega = 0.0;
  double c_v = 0.0;
};

/// c_ω = max ρ‡_ω and c_v = max (ρ‡_v)² / (2 α_v).
WorstCase worst_case_constants(double max_rho_omega, double max_rho_v, const GainSchedule& gains);

struct UltimateBound {
  double c_omega = 0.0;
  double c_v = 0.0;
  double alpha_n = 0.0;
  double eps0 = 0.0;
  /// max V over the connected part of {|δq₀|‖δq⃗‖² + ‖δp‖² ≤ ε₀} that
  /// contains the identity.
  double M = 0.0;
  /// max V over the whole set. The set always contains the δq₀ = 0 shell,
  /// so this equals 1 + ε₀/2.
  double M_full = 0.0;
  double gamma = 1.0;
};

UltimateBound ultimate_bound(double c_omega, double c_v, const GainSchedule& gains, double gamma_omega,
                             double gamma_v);

/// The maximization behind UltimateBound::M, exposed for testing.
/// Returns {M, M_full}.
std::pair<double, double> max_lyapunov_on_sublevel(double eps0);

}  // namespace dqgp::control
