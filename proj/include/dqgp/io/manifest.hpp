#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dqgp::io {

inline constexpr const char* kArtifactVersion = "0.1.0";

std::string sha1_hex(const std::string& data);
/// Digest git assigns to a blob with this content: sha1("blob <n>\0" + data).
std::string git_blob_digest(const std::string& data);

struct OutputFile {
  std::string path;  // relative to the run directory
  std::string digest;
};

struct RunManifest {
  std::string artifact_version = kArtifactVersion;
  std::string name;
  std::string config_digest;
  std::vector<std::uint64_t> seeds;
  bool compensate = true;
  bool gp_enabled = true;
  int tick_schema = 1;
  int update_schema = 1;
  std::vector<OutputFile> outputs;
  double wall_clock_s = 0.0;
};

nlohmann::json manifest_to_json(const RunManifest& m);
/// Throws ConfigError on missing fields.
RunManifest manifest_from_json(const nlohmann::json& j);

}  // namespace dqgp::io
