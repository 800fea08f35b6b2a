#include "dqgp/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <omp.h>

#include "dqgp/errors.hpp"

namespace dqgp::harness {

namespace {

constexpr double kMinNoiseVar = 1e-8;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

struct PoseTick {
  UnitDualQuaternion meas;
  PoseError err;
  Vec3 omega_cmd_mean = Vec3::Zero();  // over the interval that follows
  Vec3 v_cmd_mean = Vec3::Zero();
};

struct GPSide {
  gp::GPDataset data;
  gp::KernelConfig kernel;
  gp::GPPosterior post;
  gp::ErrorBoundModel bound;
};

gp::GPPosterior refit(GPSide& side, gp::HyperGrid grid, const std::vector<double>& noise_scale, double known,
                      bool hyper) {
  if (hyper && side.data.size() >= 3) {
    if (grid.noise_var.empty()) {
      for (const double s : noise_scale) grid.noise_var.push_back(known * s);
    }
    const gp::HyperFit fit = gp::fit_hyperparameters(side.data, grid);
    side.kernel = fit.kernel;
    if (fit.noise_var != side.data.noise_var()) side.data = side.data.with_noise_var(fit.noise_var);
  }
  return gp::fit_posterior(side.data, side.kernel);
}

// Evenly spaced picks of at most k entries.
template <typename T>
std::vector<T> spread(const std::vector<T>& xs, std::size_t k) {
  if (xs.size() <= k) return xs;
  std::vector<T> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(xs[i * (xs.size() - 1) / (k - 1)]);
  return out;
}

}  // namespace

void GPSettings::validate() const {
  require(batch >= 1, "gp.batch must be at least 1");
  require(n_end >= 1, "gp.n_end must be at least 1");
  require(warmup >= 1, "gp.warmup must be at least 1");
  require(capacity >= 1, "gp.capacity must be at least 1");
  require(label_span >= 1, "gp.label_span must be at least 1");
  require(gamma_omega > 0.0 && gamma_omega < 1.0, "gp.gamma_omega must lie in (0, 1)");
  require(gamma_v > 0.0 && gamma_v < 1.0, "gp.gamma_v must lie in (0, 1)");
  require(xi_omega >= 0.0 && xi_v >= 0.0, "gp.xi must be nonnegative");
  require(c_grid_extra >= 2, "gp.c_grid_extra must be at least 2");
  for (const double s : noise_scale) require(s > 0.0, "gp.noise_scale entries must be positive");
  try {
    kernel_omega.validate();
    kernel_v.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("gp kernel: ") + e.what());
  }
  for (const auto* g : {&grid_omega, &grid_v}) {
    require(!g->sigma_f2.empty() && !g->ell.empty() && !g->lambda.empty(), "gp grid lists must be nonempty");
  }
}

void ExperimentConfig::validate() const {
  try {
    trajectory.validate();
    field.validate();
    noise.validate();
    gains.validate();
    noise.pose_stride(dt);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  require(dt > 0.0 && dt <= kMaxStep, "dt must lie in (0, 0.1]");
  const double r = trajectory.duration / dt;
  require(std::abs(r - std::round(r)) < 1e-9 * r, "duration must be a whole number of control steps");
  require(!seeds.empty(), "seed list must be nonempty");
  require(window_len > 0.0, "window_len must be positive");
  require(settle >= 0.0 && settle < trajectory.duration, "settle must lie in [0, duration)");
  gp.validate();
}

int ExperimentConfig::steps() const { return static_cast<int>(std::lround(trajectory.duration / dt)); }

EpisodeLog run_episode(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const sim::Reference ref(cfg.trajectory);
  const int steps = cfg.steps();
  const int stride = cfg.noise.pose_stride(cfg.dt);
  const GPSettings& gs = cfg.gp;
  const double span_t = gs.label_span * stride * cfg.dt;

  // Label noise implied by the sensor model.
  const double var_w =
      2.0 * cfg.noise.mag_angle_sigma * cfg.noise.mag_angle_sigma / (3.0 * span_t * span_t) +
      cfg.noise.gyro_arw * cfg.noise.gyro_arw / span_t;
  const double var_v = 2.0 * cfg.noise.pos_sigma * cfg.noise.pos_sigma / (span_t * span_t) +
                       cfg.noise.vel_noise_density * cfg.noise.vel_noise_density / span_t;

  const double noise_w = std::max(var_w, kMinNoiseVar), noise_v = std::max(var_v, kMinNoiseVar);
  GPSide rot{gp::GPDataset(gp::InputSpace::S3, noise_w, gs.capacity), gs.kernel_omega, {}, {}};
  GPSide tra{gp::GPDataset(gp::InputSpace::SE3, noise_v, gs.capacity), gs.kernel_v, {}, {}};
  const Vec3 xi_w = Vec3::Constant(gs.xi_omega), xi_v = Vec3::Constant(gs.xi_v);
  if (gs.enabled) {
    rot.post = gp::fit_posterior(rot.data, rot.kernel);
    tra.post = gp::fit_posterior(tra.data, tra.kernel);
    rot.bound = gp::make_error_bound(rot.post, xi_w, gs.gamma_omega);
    tra.bound = gp::make_error_bound(tra.post, xi_v, gs.gamma_v);
  }
  // Snapshot built at a pose tick, swapped in at the next control tick.
  std::optional<std::pair<GPSide, GPSide>> staged;

  EpisodeLog log;
  log.name = cfg.name;
  log.seed = seed;
  log.compensate = cfg.compensate;
  log.gp_enabled = gs.enabled;
  log.dt = cfg.dt;
  log.ticks.reserve(static_cast<std::size_t>(steps));

  sim::SimState state = sim::SimState::initial(ref.at(0.0).Q_d * dq_from_pose(cfg.initial_offset), seed, cfg.noise.seed);
  std::vector<PoseTick> history;
  std::vector<gp::Sample> pending_w, pending_v;
  std::size_t labels = 0;
  int version = -1;
  std::size_t updates = 0;
  Vec3 sum_w = Vec3::Zero(), sum_v = Vec3::Zero();
  gp::Prediction pw, pv;
  double rho_w = 0.0, rho_v = 0.0;

  for (int k = 0; k < steps; ++k) {
    const double t = k * cfg.dt;
    try {
      bool predict_now = false;
      if (staged) {
        rot = std::move(staged->first);
        tra = std::move(staged->second);
        staged.reset();
        ++version;
        predict_now = true;
      }

      if (k % stride == 0) {
        if (!history.empty()) {
          history.back().omega_cmd_mean = sum_w / stride;
          history.back().v_cmd_mean = sum_v / stride;
        }
        sum_w.setZero();
        sum_v.setZero();
        const UnitDualQuaternion meas = sim::measure_dq(state, cfg.noise);
        history.push_back({meas, pose_error(ref.at(t).Q_d, meas), Vec3::Zero(), Vec3::Zero()});
        predict_now = true;

        const std::size_t j = history.size() - 1;
        const auto span = static_cast<std::size_t>(gs.label_span);
        if (gs.enabled && updates < gs.n_end && j >= span) {
          const PoseTick& a = history[j - span];
          const PoseTick& b = history[j];
          Vec3 mw = Vec3::Zero(), mv = Vec3::Zero();
          for (std::size_t i = j - span; i < j; ++i) {
            mw += history[i].omega_cmd_mean;
            mv += history[i].v_cmd_mean;
          }
          const Vec3 y_w = rotation_vector(a.meas.attitude().conj() * b.meas.attitude()) / span_t - mw / span;
          const Vec3 y_v = (dq_to_pose(b.meas).position - dq_to_pose(a.meas).position) / span_t - mv / span;
          pending_w.push_back({gp::make_input(a.err.attitude_error()), y_w});
          pending_v.push_back({gp::make_input(a.err.dQ), y_v});
          ++labels;

          if (labels >= gs.warmup + updates * gs.batch) {
            GPSide nw{rot.data.push(pending_w), rot.kernel, {}, {}};
            GPSide nv{tra.data.push(pending_v), tra.kernel, {}, {}};
            pending_w.clear();
            pending_v.clear();
            nw.post = refit(nw, gs.grid_omega, gs.noise_scale, noise_w, gs.refit_hyper);
            nv.post = refit(nv, gs.grid_v, gs.noise_scale, noise_v, gs.refit_hyper);
            nw.bound = gp::make_error_bound(nw.post, xi_w, gs.gamma_omega);
            nv.bound = gp::make_error_bound(nv.post, xi_v, gs.gamma_v);

            std::vector<gp::Input> grid_w = nw.data.inputs(), grid_v = nv.data.inputs();
            for (const PoseTick& p : spread(history, gs.c_grid_extra)) {
              grid_w.push_back(gp::make_input(p.err.attitude_error()));
              grid_v.push_back(gp::make_input(p.err.dQ));
            }
            const double max_w = gp::rho_bound_batch(nw.post, nw.bound, grid_w).maxCoeff();
            const double max_v = gp::rho_bound_batch(nv.post, nv.bound, grid_v).maxCoeff();
            const control::WorstCase wc = control::worst_case_constants(max_w, max_v, cfg.gains);
            const control::UltimateBound ub =
                control::ultimate_bound(wc.c_omega, wc.c_v, cfg.gains, gs.gamma_omega, gs.gamma_v);

            UpdateRow row;
            row.n = static_cast<int>(updates);
            row.t = t;
            row.t_active = t + cfg.dt;
            row.N = nv.data.size();
            row.gamma_info_omega = nw.bound.info_gain(0);
            row.gamma_info_v = nv.bound.info_gain(0);
            row.beta_omega = nw.bound.beta(0);
            row.beta_v = nv.bound.beta(0);
            row.ell_omega = nw.kernel.ell;
            row.sigma_f2_omega = nw.kernel.sigma_f2;
            row.ell_v = nv.kernel.ell;
            row.sigma_f2_v = nv.kernel.sigma_f2;
            row.c_omega = ub.c_omega;
            row.c_v = ub.c_v;
            row.eps0 = ub.eps0;
            row.M = ub.M;
            row.M_full = ub.M_full;
            log.updates.push_back(row);
            staged.emplace(std::move(nw), std::move(nv));
            ++updates;
          }
        }
      }

      const PoseError& held = history.back().err;
      if (gs.enabled && predict_now) {
        const gp::Input xw = gp::make_input(held.attitude_error());
        const gp::Input xv = gp::make_input(held.dQ);
        pw = rot.post.predict(xw);
        pv = tra.post.predict(xv);
        rho_w = std::sqrt((rot.bound.beta.array().square() * pw.var.array()).sum());
        rho_v = std::sqrt((tra.bound.beta.array().square() * pv.var.array()).sum());
      }

      // The command is held over [t, t + dt], so the feedforward twist is
      // sampled at the midpoint of the step.
      const sim::ReferenceSample r = ref.at(t);
      const Twist tw_ff = ref.at(t + 0.5 * cfg.dt).tw_d;
      control::VelocityCommand cmd = control::nominal_control(held, tw_ff, cfg.gains);
      if (gs.enabled && cfg.compensate && version >= 0) cmd = control::learned_control(cmd, pw.mean, pv.mean);
      if (!cmd.is_finite()) throw InvalidInput("non-finite velocity command");

      TickRow row;
      row.t = t;
      row.version = version;
      row.Q_true = state.Q_true;
      row.Q_meas = history.back().meas;
      row.Q_d = r.Q_d;
      const PoseError truth = pose_error(r.Q_d, state.Q_true);
      row.dq_vec = truth.dq_vec;
      row.dq0 = truth.dq0;
      row.dp = truth.dp_inertial;
      row.V = control::lyapunov_V(truth);
      row.omega_cmd = cmd.omega_cmd;
      row.v_cmd = cmd.v_cmd;
      if (gs.enabled) {
        row.mu_omega = pw.mean;
        row.mu_v = pv.mean;
        row.var_omega = pw.var(0);
        row.var_v = pv.var(0);
        row.rho_omega = rho_w;
        row.rho_v = rho_v;
      }

      sim::StepInfo info;
      state = sim::apply_and_step(state, cmd, cfg.field, cfg.noise, cfg.dt, &info);
      row.dist_omega = info.disturbance.omega;
      row.dist_v = info.disturbance.vel;
      log.ticks.push_back(row);
      sum_w += cmd.omega_cmd;
      sum_v += cmd.v_cmd;
    } catch (const EpisodeError&) {
      throw;
    } catch (const Error& e) {
      std::ostringstream os;
      os << "episode '" << cfg.name << "' seed " << seed << " at t = " << t << " s (tick " << k << "): " << e.what();
      throw EpisodeError(os.str());
    }
  }
  log.data_omega = rot.data.push(pending_w);
  log.data_v = tra.data.push(pending_v);
  return log;
}

std::vector<EpisodeLog> run_suite(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  const auto n = static_cast<int>(cfg.seeds.size());
  std::vector<EpisodeLog> logs(cfg.seeds.size());
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      logs[static_cast<std::size_t>(i)] = run_episode(cfg, cfg.seeds[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return logs;
}

MetricsWindow sliding_metrics(const EpisodeLog& log, double window_len) {
  if (!(window_len > 0.0)) throw InvalidInput("window length must be positive");
  if (log.ticks.empty()) throw InvalidInput("episode log is empty");
  MetricsWindow m;
  m.window_len = window_len;
  const std::size_t n = log.ticks.size();
  const auto w = static_cast<std::size_t>(std::max(1L, std::lround(window_len / log.dt)));
  std::vector<double> ea(n), ep(n);
  for (std::size_t i = 0; i < n; ++i) {
    ea[i] = log.ticks[i].dq_vec.norm();
    ep[i] = log.ticks[i].dp.norm();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
    double sa = 0.0, sa2 = 0.0, sp = 0.0, sp2 = 0.0;
    for (std::size_t j = lo; j <= i; ++j) {
      sa += ea[j];
      sa2 += ea[j] * ea[j];
      sp += ep[j];
      sp2 += ep[j] * ep[j];
    }
    const auto c = static_cast<double>(i + 1 - lo);
    m.t.push_back(log.ticks[i].t);
    m.mae_att.push_back(sa / c);
    m.mse_att.push_back(sa2 / c);
    m.mae_pos.push_back(sp / c);
    m.mse_pos.push_back(sp2 / c);
  }
  return m;
}

EpisodeErrors episode_errors(const EpisodeLog& log) {
  if (log.ticks.empty()) throw InvalidInput("episode log is empty");
  EpisodeErrors e;
  for (const TickRow& r : log.ticks) {
    const double a = r.dq_vec.norm(), p = r.dp.norm();
    e.mae_att += a;
    e.mse_att += a * a;
    e.mae_pos += p;
    e.mse_pos += p * p;
  }
  const auto n = static_cast<double>(log.ticks.size());
  e.mae_att /= n;
  e.mse_att /= n;
  e.mae_pos /= n;
  e.mse_pos /= n;
  return e;
}

namespace {

EpisodeErrors average(const std::vector<const EpisodeLog*>& logs) {
  EpisodeErrors s;
  for (const EpisodeLog* l : logs) {
    const EpisodeErrors e = episode_errors(*l);
    s.mae_att += e.mae_att;
    s.mse_att += e.mse_att;
    s.mae_pos += e.mae_pos;
    s.mse_pos += e.mse_pos;
  }
  const auto n = static_cast<double>(logs.size());
  return {s.mae_att / n, s.mse_att / n, s.mae_pos / n, s.mse_pos / n};
}

double ratio(double open, double gp) {
  if (gp == 0.0) return open == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return open / gp;
}

}  // namespace

std::vector<SummaryRow> summary_table(const std::vector<SummaryCell>& cells) {
  std::vector<SummaryRow> rows;
  for (const SummaryCell& c : cells) {
    if (c.with_gp.empty() || c.without_gp.empty()) {
      throw InvalidInput("summary cell '" + c.trajectory + "' needs episodes with and without GP");
    }
    SummaryRow r;
    r.trajectory = c.trajectory;
    r.episodes_gp = c.with_gp.size();
    r.episodes_open = c.without_gp.size();
    r.gp = average(c.with_gp);
    r.open = average(c.without_gp);
    r.ratio = {ratio(r.open.mae_att, r.gp.mae_att), ratio(r.open.mse_att, r.gp.mse_att),
               ratio(r.open.mae_pos, r.gp.mae_pos), ratio(r.open.mse_pos, r.gp.mse_pos)};
    rows.push_back(r);
  }
  return rows;
}

std::vector<SummaryRow> summary_table(const std::vector<EpisodeLog>& logs) {
  std::vector<SummaryCell> cells;
  std::map<std::string, std::size_t> index;
  for (const EpisodeLog& l : logs) {
    auto [it, fresh] = index.try_emplace(l.name, cells.size());
    if (fresh) cells.push_back({l.name, {}, {}});
    SummaryCell& c = cells[it->second];
    (l.compensate && l.gp_enabled ? c.with_gp : c.without_gp).push_back(&l);
  }
  return summary_table(cells);
}

double max_V_after(const EpisodeLog& log, double settle) {
  double v = -std::numeric_limits<double>::infinity();
  for (const TickRow& r : log.ticks) {
    if (r.t >= settle - 1e-12) v = std::max(v, r.V);
  }
  if (!std::isfinite(v)) throw InvalidInput("no ticks after the settle time");
  return v;
}

double verify_ultimate_bound(const std::vector<EpisodeLog>& logs, double M, double settle) {
  if (logs.empty()) throw InvalidInput("no episodes to verify");
  std::size_t ok = 0;
  for (const EpisodeLog& l : logs) ok += max_V_after(l, settle) <= M ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(logs.size());
}

double verify_ultimate_bound(const std::vector<EpisodeLog>& logs, double settle) {
  if (logs.empty()) throw InvalidInput("no episodes to verify");
  std::size_t ok = 0;
  for (const EpisodeLog& l : logs) {
    if (l.updates.empty()) throw InvalidInput("episode without GP updates has no ultimate bound");
    ok += max_V_after(l, settle) <= l.updates.back().M ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(logs.size());
}

}  // namespace dqgp::harness
