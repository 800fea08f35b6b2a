// dqgp: run pose-tracking episodes, tabulate them and dump GP diagnostics.
//
// Exit codes: 0 success, 2 configuration / input error, 3 runtime error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqgp/errors.hpp"
#include "dqgp/harness/experiment.hpp"
#include "dqgp/harness/presets.hpp"
#include "dqgp/io/config.hpp"
#include "dqgp/io/csv.hpp"
#include "dqgp/io/episode_io.hpp"
#include "dqgp/io/manifest.hpp"

namespace fs = std::filesystem;
using namespace dqgp;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string seed_file(const char* stem, std::uint64_t seed) {
  return std::string(stem) + "_seed" + std::to_string(seed) + ".csv";
}

// "3", "1-16", "1,4,9-11".
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  const auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("bad seed list '" + text + "'");
    }
    return std::stoull(s);
  };
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(number(item));
    } else {
      const auto lo = number(item.substr(0, dash)), hi = number(item.substr(dash + 1));
      if (hi < lo || hi - lo > 100000) throw ConfigError("bad seed range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct RunOptions {
  std::string config_path, preset, out, seeds;
  std::vector<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool no_compensate = false;
  int workers = 0;
};

harness::ExperimentConfig resolve_config(const RunOptions& o) {
  json j = o.config_path.empty() ? json::object() : io::load_config_file(o.config_path);
  if (!j.is_object()) throw ConfigError("config file " + o.config_path + " must hold a JSON object");
  if (!o.preset.empty()) j["preset"] = o.preset;
  for (const auto& s : o.overrides) io::apply_override(j, s);
  harness::ExperimentConfig cfg = io::config_from_json(j);
  if (o.no_compensate) cfg.compensate = false;
  if (!o.seed.empty() || !o.seeds.empty()) {
    cfg.seeds = o.seed;
    if (!o.seeds.empty()) {
      const auto more = parse_seed_list(o.seeds);
      cfg.seeds.insert(cfg.seeds.end(), more.begin(), more.end());
    }
  }
  cfg.validate();
  return cfg;
}

std::string default_out(const harness::ExperimentConfig& cfg) {
  const char* env = std::getenv("DQGP_OUT_DIR");
  const fs::path base = env && *env ? fs::path(env) : fs::path("runs");
  return (base / (cfg.name + (cfg.compensate ? "" : "-openloop"))).string();
}

int cmd_run(const RunOptions& o) {
  const harness::ExperimentConfig cfg = resolve_config(o);
  const std::string out = o.out.empty() ? default_out(cfg) : o.out;
  const auto t0 = std::chrono::steady_clock::now();
  // Every episode finishes before anything is written, so a failed run
  // leaves no logs behind.
  const auto logs = harness::run_suite(cfg, o.workers);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(out);
  io::RunManifest m;
  m.name = cfg.name;
  m.config_digest = io::config_digest(cfg);
  m.seeds = cfg.seeds;
  m.compensate = cfg.compensate;
  m.gp_enabled = cfg.gp.enabled;
  m.tick_schema = io::kTickSchema;
  m.update_schema = io::kUpdateSchema;
  m.wall_clock_s = wall;
  const auto emit = [&](const std::string& file, const std::string& text) {
    io::write_file_atomic((fs::path(out) / file).string(), text);
    m.outputs.push_back({file, io::git_blob_digest(text)});
  };
  emit("config.json", io::config_to_json(cfg).dump(2) + "\n");
  for (const auto& log : logs) {
    emit(seed_file("ticks", log.seed), io::to_csv(io::tick_table(log)));
    emit(seed_file("updates", log.seed), io::to_csv(io::update_table(log)));
    emit(seed_file("metrics", log.seed), io::to_csv(io::metrics_table(harness::sliding_metrics(log, cfg.window_len))));
    const auto e = harness::episode_errors(log);
    std::printf("seed %llu: MAE att %.5f  MSE att %.5f  MAE pos %.5f  MSE pos %.5f  updates %zu\n",
                static_cast<unsigned long long>(log.seed), e.mae_att, e.mse_att, e.mae_pos, e.mse_pos,
                log.updates.size());
  }
  io::write_file_atomic((fs::path(out) / "manifest.json").string(), io::manifest_to_json(m).dump(2) + "\n");
  std::printf("wrote %zu episode(s) to %s in %.2f s\n", logs.size(), out.c_str(), wall);
  return 0;
}

io::RunManifest read_manifest(const std::string& dir) {
  const fs::path p = fs::path(dir) / "manifest.json";
  if (!fs::is_regular_file(p)) throw ConfigError("no manifest.json in run directory " + dir);
  const json j = json::parse(io::read_file(p.string()), nullptr, false);
  if (j.is_discarded()) throw ConfigError(p.string() + " is not valid JSON");
  return io::manifest_from_json(j);
}

io::CsvTable read_ticks(const std::string& dir, std::uint64_t seed) {
  return io::read_csv((fs::path(dir) / seed_file("ticks", seed)).string());
}

std::string csv_or_json(const io::CsvTable& t, const std::string& format) {
  if (format == "csv") return io::to_csv(t);
  json rows = json::array();
  for (const auto& r : t.rows) {
    json obj = json::object();
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
      const std::string& cell = r[k];
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() && *end == '\0') {
        obj[t.columns[k]] = x;
      } else {
        obj[t.columns[k]] = cell;
      }
    }
    rows.push_back(std::move(obj));
  }
  return json{{"schema", t.schema}, {"version", t.version}, {"rows", rows}}.dump(2) + "\n";
}

int cmd_table(const std::vector<std::string>& dirs, const std::string& out, const std::string& format) {
  std::vector<harness::EpisodeLog> logs;
  std::map<int, std::string> tick_versions;
  for (const auto& d : dirs) {
    const auto m = read_manifest(d);
    tick_versions.emplace(m.tick_schema, d);
    if (tick_versions.size() > 1) {
      const auto a = tick_versions.begin(), b = std::next(a);
      throw ConfigError("mixed schema versions: episode-ticks v" + std::to_string(a->first) + " in " + a->second +
                        " and v" + std::to_string(b->first) + " in " + b->second);
    }
    if (m.seeds.empty()) throw ConfigError("run directory " + d + " lists no episodes");
    for (const auto seed : m.seeds) {
      logs.push_back(io::episode_from_tables(read_ticks(d, seed),
                                             io::read_csv((fs::path(d) / seed_file("updates", seed)).string()),
                                             m.name, seed, m.compensate && m.gp_enabled));
    }
  }
  const auto rows = harness::summary_table(logs);
  const io::CsvTable csv = io::summary_csv(rows);
  const std::string text = io::summary_text(rows);
  if (!out.empty()) {
    fs::create_directories(out);
    io::write_file_atomic((fs::path(out) / "summary.csv").string(), io::to_csv(csv));
    io::write_file_atomic((fs::path(out) / "summary.txt").string(), text);
  }
  std::cout << (format.empty() || format == "text" ? text : csv_or_json(csv, format));
  return 0;
}

int cmd_gp_diagnose(const std::string& dir, std::int64_t seed, const std::string& out, const std::string& format) {
  const auto m = read_manifest(dir);
  if (m.seeds.empty()) throw ConfigError("run directory " + dir + " lists no episodes");
  const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : m.seeds.front();
  if (std::find(m.seeds.begin(), m.seeds.end(), s) == m.seeds.end()) {
    throw ConfigError("seed " + std::to_string(s) + " is not part of run " + dir);
  }
  const io::CsvTable diag = io::diagnose_table(read_ticks(dir, s));
  const std::string body = csv_or_json(diag, format.empty() ? "csv" : format);
  if (out.empty()) {
    std::cout << body;
  } else {
    io::write_file_atomic(out, body);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-quaternion pose tracking with GP disturbance compensation"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "run one episode per seed and write logs + manifest");
  run->add_option("--config", ro.config_path, "JSON config file");
  run->add_option("--preset", ro.preset, "built-in scenario (see `dqgp presets`)");
  run->add_option("--seed", ro.seed, "seed; repeatable")->allow_extra_args(false);
  run->add_option("--seeds", ro.seeds, "seed list such as 1-16 or 1,3,5");
  run->add_option("--out", ro.out, "run directory (default $DQGP_OUT_DIR/<name>, else runs/<name>)");
  run->add_flag("--no-compensate", ro.no_compensate, "learn but do not inject the GP mean");
  run->add_option("--workers", ro.workers, "episode worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  run->add_option("--set", ro.overrides, "override a config key, e.g. --set gp.batch=20")->allow_extra_args(false);

  std::vector<std::string> table_dirs;
  std::string table_out, table_format;
  auto* table = app.add_subcommand("table", "summarize run directories like a GP / without-GP error table");
  table->add_option("run_dirs", table_dirs, "run directories")->required();
  table->add_option("--out", table_out, "also write summary.csv and summary.txt here");
  table->add_option("--format", table_format, "stdout format")->check(CLI::IsMember({"text", "csv", "json"}));

  std::string diag_dir, diag_out, diag_format;
  std::int64_t diag_seed = -1;
  auto* diag = app.add_subcommand("gp-diagnose", "per-tick disturbance, GP mean, 2-sigma band and bound");
  diag->add_option("run_dir", diag_dir, "run directory")->required();
  diag->add_option("--seed", diag_seed, "episode (default: first seed of the run)");
  diag->add_option("--out", diag_out, "output file (default stdout)");
  diag->add_option("--format", diag_format, "output format")->check(CLI::IsMember({"csv", "json"}));

  auto* presets = app.add_subcommand("presets", "list built-in scenarios");
  auto* show = app.add_subcommand("config", "print the resolved config as JSON");
  show->add_option("--config", ro.config_path, "JSON config file");
  show->add_option("--preset", ro.preset, "built-in scenario");
  show->add_option("--set", ro.overrides, "override a config key")->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(ro);
    if (*table) return cmd_table(table_dirs, table_out, table_format);
    if (*diag) return cmd_gp_diagnose(diag_dir, diag_seed, diag_out, diag_format);
    if (*presets) {
      for (const auto& n : harness::preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (*show) {
      std::cout << io::config_to_json(resolve_config(ro)).dump(2) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "dqgp: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "dqgp: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
