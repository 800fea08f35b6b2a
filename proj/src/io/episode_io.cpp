#include "dqgp/io/episode_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dqgp/errors.hpp"

namespace dqgp::io {

using harness::EpisodeLog;
using harness::TickRow;
using harness::UpdateRow;

namespace {

const char* const kAxes[] = {"x", "y", "z"};

void add_vec(std::vector<std::string>& cols, const std::string& stem) {
  for (const char* a : kAxes) cols.push_back(stem + "_" + a);
}

void add_dq(std::vector<std::string>& cols, const std::string& stem) {
  for (const char* p : {"r", "d"}) {
    for (const char* a : {"x", "y", "z", "w"}) cols.push_back(stem + "_" + p + a);
  }
}

std::vector<std::string> tick_columns(bool gp) {
  std::vector<std::string> c{"t", "version"};
  add_dq(c, "q_true");
  add_dq(c, "q_meas");
  add_dq(c, "q_d");
  add_vec(c, "dq");
  c.push_back("dq0");
  add_vec(c, "dp");
  c.push_back("V");
  add_vec(c, "omega_cmd");
  add_vec(c, "v_cmd");
  add_vec(c, "dist_omega");
  add_vec(c, "dist_v");
  if (gp) {
    add_vec(c, "mu_omega");
    add_vec(c, "mu_v");
    for (const char* s : {"var_omega", "var_v", "rho_omega", "rho_v"}) c.emplace_back(s);
  }
  return c;
}

const std::vector<std::string> kUpdateColumns{
    "n",         "t",     "t_active", "N",       "Gamma_omega", "Gamma_v", "beta_omega", "beta_v",
    "ell_omega", "sf2_omega", "ell_v", "sf2_v",  "c_omega",     "c_v",     "eps0",       "M",  "M_full"};

struct RowWriter {
  std::vector<std::string> cells;
  void num(double x) { cells.push_back(format_double(x)); }
  void vec(const Vec3& v) {
    for (int i = 0; i < 3; ++i) num(v(i));
  }
  void dq(const UnitDualQuaternion& q) {
    for (const double x : q.dq().to_array()) num(x);
  }
};

struct RowReader {
  const std::vector<std::string>& cells;
  std::size_t i = 0;
  double num() { return parse_double(cells.at(i++)); }
  Vec3 vec() {
    const double a = num(), b = num(), c = num();
    return {a, b, c};
  }
  UnitDualQuaternion dq() {
    std::array<double, 8> a{};
    for (double& x : a) x = num();
    return UnitDualQuaternion::checked(DualQuaternion::from_array(a));
  }
};

void expect_schema(const CsvTable& t, const std::string& schema, int version) {
  if (t.schema != schema) throw ConfigError("expected a " + schema + " table, found " + t.schema);
  if (t.version != version) {
    throw ConfigError(schema + " schema v" + std::to_string(t.version) + " is not the supported v" +
                      std::to_string(version));
  }
}

}  // namespace

CsvTable tick_table(const EpisodeLog& log) {
  CsvTable t{"episode-ticks", kTickSchema, tick_columns(log.gp_enabled), {}};
  t.rows.reserve(log.ticks.size());
  for (const TickRow& r : log.ticks) {
    RowWriter w;
    w.num(r.t);
    w.num(r.version);
    w.dq(r.Q_true);
    w.dq(r.Q_meas);
    w.dq(r.Q_d);
    w.vec(r.dq_vec);
    w.num(r.dq0);
    w.vec(r.dp);
    w.num(r.V);
    w.vec(r.omega_cmd);
    w.vec(r.v_cmd);
    w.vec(r.dist_omega);
    w.vec(r.dist_v);
    if (log.gp_enabled) {
      w.vec(r.mu_omega);
      w.vec(r.mu_v);
      w.num(r.var_omega);
      w.num(r.var_v);
      w.num(r.rho_omega);
      w.num(r.rho_v);
    }
    t.rows.push_back(std::move(w.cells));
  }
  return t;
}

CsvTable update_table(const EpisodeLog& log) {
  CsvTable t{"episode-updates", kUpdateSchema, kUpdateColumns, {}};
  for (const UpdateRow& u : log.updates) {
    RowWriter w;
    for (const double x : {static_cast<double>(u.n), u.t, u.t_active, static_cast<double>(u.N), u.gamma_info_omega,
                           u.gamma_info_v, u.beta_omega, u.beta_v, u.ell_omega, u.sigma_f2_omega, u.ell_v,
                           u.sigma_f2_v, u.c_omega, u.c_v, u.eps0, u.M, u.M_full}) {
      w.num(x);
    }
    t.rows.push_back(std::move(w.cells));
  }
  return t;
}

CsvTable metrics_table(const harness::MetricsWindow& m) {
  CsvTable t{"metrics-window", kMetricsSchema, {"t", "window_len", "mae_att", "mse_att", "mae_pos", "mse_pos"}, {}};
  for (std::size_t i = 0; i < m.t.size(); ++i) {
    RowWriter w;
    for (const double x : {m.t[i], m.window_len, m.mae_att[i], m.mse_att[i], m.mae_pos[i], m.mse_pos[i]}) w.num(x);
    t.rows.push_back(std::move(w.cells));
  }
  return t;
}

EpisodeLog episode_from_tables(const CsvTable& ticks, const CsvTable& updates, const std::string& name,
                               std::uint64_t seed, bool compensate) {
  expect_schema(ticks, "episode-ticks", kTickSchema);
  expect_schema(updates, "episode-updates", kUpdateSchema);
  EpisodeLog log;
  log.name = name;
  log.seed = seed;
  log.compensate = compensate;
  log.gp_enabled = ticks.has("mu_omega_x");
  if (ticks.columns != tick_columns(log.gp_enabled)) throw ConfigError("unexpected episode-ticks columns");
  if (updates.columns != kUpdateColumns) throw ConfigError("unexpected episode-updates columns");
  for (const auto& cells : ticks.rows) {
    RowReader r{cells};
    TickRow row;
    row.t = r.num();
    row.version = static_cast<int>(r.num());
    row.Q_true = r.dq();
    row.Q_meas = r.dq();
    row.Q_d = r.dq();
    row.dq_vec = r.vec();
    row.dq0 = r.num();
    row.dp = r.vec();
    row.V = r.num();
    row.omega_cmd = r.vec();
    row.v_cmd = r.vec();
    row.dist_omega = r.vec();
    row.dist_v = r.vec();
    if (log.gp_enabled) {
      row.mu_omega = r.vec();
      row.mu_v = r.vec();
      row.var_omega = r.num();
      row.var_v = r.num();
      row.rho_omega = r.num();
      row.rho_v = r.num();
    }
    log.ticks.push_back(row);
  }
  if (log.ticks.size() >= 2) log.dt = log.ticks[1].t - log.ticks[0].t;
  for (const auto& cells : updates.rows) {
    RowReader r{cells};
    UpdateRow u;
    u.n = static_cast<int>(r.num());
    u.t = r.num();
    u.t_active = r.num();
    u.N = static_cast<std::size_t>(r.num());
    u.gamma_info_omega = r.num();
    u.gamma_info_v = r.num();
    u.beta_omega = r.num();
    u.beta_v = r.num();
    u.ell_omega = r.num();
    u.sigma_f2_omega = r.num();
    u.ell_v = r.num();
    u.sigma_f2_v = r.num();
    u.c_omega = r.num();
    u.c_v = r.num();
    u.eps0 = r.num();
    u.M = r.num();
    u.M_full = r.num();
    log.updates.push_back(u);
  }
  return log;
}

CsvTable summary_csv(const std::vector<harness::SummaryRow>& rows) {
  CsvTable t{"summary",
             kSummarySchema,
             {"trajectory", "episodes_gp", "episodes_open", "mae_att_gp", "mae_att_open", "mae_att_ratio",
              "mse_att_gp", "mse_att_open", "mse_att_ratio", "mae_pos_gp", "mae_pos_open", "mae_pos_ratio",
              "mse_pos_gp", "mse_pos_open", "mse_pos_ratio"},
             {}};
  for (const auto& r : rows) {
    RowWriter w;
    w.cells.push_back(r.trajectory);
    w.num(static_cast<double>(r.episodes_gp));
    w.num(static_cast<double>(r.episodes_open));
    for (const auto& [g, o, q] : {std::tuple{r.gp.mae_att, r.open.mae_att, r.ratio.mae_att},
                                  std::tuple{r.gp.mse_att, r.open.mse_att, r.ratio.mse_att},
                                  std::tuple{r.gp.mae_pos, r.open.mae_pos, r.ratio.mae_pos},
                                  std::tuple{r.gp.mse_pos, r.open.mse_pos, r.ratio.mse_pos}}) {
      w.num(g);
      w.num(o);
      w.num(q);
    }
    t.rows.push_back(std::move(w.cells));
  }
  return t;
}

std::string summary_text(const std::vector<harness::SummaryRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %-11s %12s %12s %12s %12s\n", "Trajectory", "Mode", "MAE att", "MSE att",
                "MAE pos", "MSE pos");
  os << buf;
  for (const auto& r : rows) {
    const auto line = [&](const char* traj, const char* mode, const harness::EpisodeErrors& e) {
      std::snprintf(buf, sizeof buf, "%-18s %-11s %12.5f %12.5f %12.5f %12.5f\n", traj, mode, e.mae_att, e.mse_att,
                    e.mae_pos, e.mse_pos);
      os << buf;
    };
    line(r.trajectory.c_str(), "GP", r.gp);
    line("", "w/out GP", r.open);
    line("", "ratio", r.ratio);
  }
  return os.str();
}

CsvTable diagnose_table(const CsvTable& ticks) {
  expect_schema(ticks, "episode-ticks", kTickSchema);
  if (!ticks.has("mu_omega_x")) throw ConfigError("log has no GP columns (was the GP disabled?)");
  CsvTable out{"gp-diagnose", kDiagnoseSchema, {"t"}, {}};
  for (const char* g : {"omega", "v"}) {
    for (const char* a : kAxes) {
      for (const char* f : {"dist", "mu", "lo", "hi"}) out.columns.push_back(std::string(f) + "_" + g + "_" + a);
    }
  }
  out.columns.push_back("rho_omega");
  out.columns.push_back("rho_v");
  const auto t = ticks.numbers("t");
  const auto var_w = ticks.numbers("var_omega"), var_v = ticks.numbers("var_v");
  const auto rho_w = ticks.numbers("rho_omega"), rho_v = ticks.numbers("rho_v");
  std::vector<std::vector<double>> dist, mu;
  for (const char* g : {"omega", "v"}) {
    for (const char* a : kAxes) {
      dist.push_back(ticks.numbers(std::string("dist_") + g + "_" + a));
      mu.push_back(ticks.numbers(std::string("mu_") + g + "_" + a));
    }
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    RowWriter w;
    w.num(t[i]);
    for (std::size_t k = 0; k < 6; ++k) {
      const double sd = std::sqrt(k < 3 ? var_w[i] : var_v[i]);
      w.num(dist[k][i]);
      w.num(mu[k][i]);
      w.num(mu[k][i] - 2.0 * sd);
      w.num(mu[k][i] + 2.0 * sd);
    }
    w.num(rho_w[i]);
    w.num(rho_v[i]);
    out.rows.push_back(std::move(w.cells));
  }
  return out;
}

}  // namespace dqgp::io
