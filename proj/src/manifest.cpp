#include "avgps/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace avgps {

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t RunManifest::hash() const {
  return content_hash(command + "\x1f" + resolved_config + "\x1f" + std::to_string(seed));
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config_path"] = config_path;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["input_hash"] = hash();
  j["resolved_config"] = nlohmann::json::parse(resolved_config, nullptr, false).is_discarded()
                             ? nlohmann::json(resolved_config)
                             : nlohmann::json::parse(resolved_config);
  return j.dump(2);
}

void RunManifest::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write manifest: " + path);
  f << to_json() << '\n';
}

}  // namespace avgps
