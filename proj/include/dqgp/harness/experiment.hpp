#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqgp/control/controller.hpp"
#include "dqgp/gp/posterior.hpp"
#include "dqgp/sim/simulator.hpp"
#include "dqgp/sim/trajectory.hpp"

namespace dqgp::harness {

struct GPSettings {
  bool enabled = true;  // false: no datasets, no updates, no GP columns
  gp::KernelConfig kernel_omega{0.1, 0.5};
  gp::KernelConfig kernel_v{0.1, 0.5};
  gp::HyperGrid grid_omega;
  gp::HyperGrid grid_v;
  bool refit_hyper = true;
  /// Multiples of the sensor-implied label noise searched during refits, so
  /// that labels worse than the sensor model (fast-varying disturbances)
  /// are not interpolated. Used only when grid.noise_var is empty.
  std::vector<double> noise_scale{1.0, 10.0, 100.0, 1000.0, 10000.0};
  std::size_t capacity = 400;
  std::size_t batch = 10;    // m_n
  std::size_t n_end = 8;     // number of retraining events
  std::size_t warmup = 10;   // samples in the first dataset
  int label_span = 10;       // pose intervals per finite-difference label
  double xi_omega = 0.5;     // RKHS norm bounds
  double xi_v = 0.5;
  double gamma_omega = 0.9;
  double gamma_v = 0.9;
  std::size_t c_grid_extra = 100;  // logged measured errors added to the c grid

  void validate() const;
};

struct ExperimentConfig {
  std::string name = "custom";
  sim::ReferenceTrajectory trajectory;
  sim::DisturbanceField field;
  sim::SensorModel noise;
  control::GainSchedule gains = control::GainSchedule::diagonal(1.0, 0.5);
  double dt = 0.01;
  /// Initial pose relative to the reference: Q(0) = Q_d(0)∘Q_offset.
  Pose initial_offset;
  GPSettings gp;
  bool compensate = true;
  std::vector<std::uint64_t> seeds{1};
  double settle = 20.0;
  double window_len = 10.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  int steps() const;
};

struct TickRow {
  double t = 0.0;
  int version = -1;  // active posterior snapshot, -1 before the first update
  UnitDualQuaternion Q_true, Q_meas, Q_d;
  Vec3 dq_vec = Vec3::Zero();  // true error
  double dq0 = 1.0;
  Vec3 dp = Vec3::Zero();
  double V = 0.0;
  Vec3 omega_cmd = Vec3::Zero(), v_cmd = Vec3::Zero();
  Vec3 mu_omega = Vec3::Zero(), mu_v = Vec3::Zero();
  double var_omega = 0.0, var_v = 0.0;
  double rho_omega = 0.0, rho_v = 0.0;
  Vec3 dist_omega = Vec3::Zero(), dist_v = Vec3::Zero();
};

struct UpdateRow {
  int n = 0;
  double t = 0.0;              // time of the pose tick that triggered it
  double t_active = 0.0;       // first tick that uses the new snapshot
  std::size_t N = 0;
  double gamma_info_omega = 0.0, gamma_info_v = 0.0;  // Γ
  double beta_omega = 0.0, beta_v = 0.0;
  double ell_omega = 0.0, sigma_f2_omega = 0.0;
  double ell_v = 0.0, sigma_f2_v = 0.0;
  double c_omega = 0.0, c_v = 0.0, eps0 = 0.0, M = 0.0, M_full = 0.0;
};

struct EpisodeLog {
  std::string name;
  std::uint64_t seed = 0;
  bool compensate = true;
  bool gp_enabled = true;
  double dt = 0.01;
  std::vector<TickRow> ticks;
  std::vector<UpdateRow> updates;
  /// Both datasets at the end of the episode.
  gp::GPDataset data_omega, data_v;
};

/// One episode of online learning-based tracking control. Measurements
/// arrive every pose tick and are held; GP labels are finite differences of
/// measured poses over `label_span` pose intervals minus the mean command.
/// Retraining happens once the dataset holds warmup + n·batch samples, for
/// n = 0 … n_end-1, and the new snapshot is used from the following tick.
/// Without `compensate` the GP still trains but its means are not applied.
EpisodeLog run_episode(const ExperimentConfig& cfg, std::uint64_t seed);

/// Episodes for every seed, in seed order, run in parallel over `workers`
/// threads (0 = OpenMP default).
std::vector<EpisodeLog> run_suite(const ExperimentConfig& cfg, int workers = 0);

struct MetricsWindow {
  double window_len = 10.0;
  std::vector<double> t;
  std::vector<double> mae_att, mse_att, mae_pos, mse_pos;
};

/// Trailing-window MAE/MSE of ‖δq⃗‖ and ‖δp‖, one entry per tick, with the
/// window truncated at the start of the episode.
MetricsWindow sliding_metrics(const EpisodeLog& log, double window_len);

struct EpisodeErrors {
  double mae_att = 0.0, mse_att = 0.0, mae_pos = 0.0, mse_pos = 0.0;
};
EpisodeErrors episode_errors(const EpisodeLog& log);

struct SummaryRow {
  std::string trajectory;
  std::size_t episodes_gp = 0, episodes_open = 0;
  EpisodeErrors gp, open;
  /// open / gp per metric (infinite when the GP value is 0 and open is not,
  /// 1 when both are 0).
  EpisodeErrors ratio;
};

struct SummaryCell {
  std::string trajectory;
  std::vector<const EpisodeLog*> with_gp, without_gp;
};

/// Seed-averaged whole-episode errors per trajectory, GP vs. without GP.
std::vector<SummaryRow> summary_table(const std::vector<SummaryCell>& cells);
/// Groups logs by name and compensate flag in first-seen order.
std::vector<SummaryRow> summary_table(const std::vector<EpisodeLog>& logs);

/// Fraction of episodes with V(t) ≤ M for all t ≥ settle.
double verify_ultimate_bound(const std::vector<EpisodeLog>& logs, double M, double settle);
/// Same, with each episode checked against the M of its last update.
double verify_ultimate_bound(const std::vector<EpisodeLog>& logs, double settle);
/// max over t ≥ settle of V(t).
double max_V_after(const EpisodeLog& log, double settle);

}  // namespace dqgp::harness
