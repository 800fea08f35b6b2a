#include "dqgp/io/manifest.hpp"

#include <cstdio>

#include <openssl/evp.h>

#include "dqgp/errors.hpp"

namespace dqgp::io {

std::string sha1_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string git_blob_digest(const std::string& data) {
  std::string blob = "blob " + std::to_string(data.size());
  blob.push_back('\0');
  blob += data;
  return sha1_hex(blob);
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"digest", o.digest}});
  return {{"artifact_version", m.artifact_version},
          {"name", m.name},
          {"config_digest", m.config_digest},
          {"seeds", m.seeds},
          {"compensate", m.compensate},
          {"gp_enabled", m.gp_enabled},
          {"tick_schema", m.tick_schema},
          {"update_schema", m.update_schema},
          {"outputs", outs},
          {"wall_clock_s", m.wall_clock_s}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.name = j.at("name").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.compensate = j.at("compensate").get<bool>();
    m.gp_enabled = j.at("gp_enabled").get<bool>();
    m.tick_schema = j.at("tick_schema").get<int>();
    m.update_schema = j.at("update_schema").get<int>();
    for (const auto& o : j.at("outputs")) {
      m.outputs.push_back({o.at("path").get<std::string>(), o.at("digest").get<std::string>()});
    }
    m.wall_clock_s = j.at("wall_clock_s").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace dqgp::io
