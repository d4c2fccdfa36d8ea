#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace avgps {

inline constexpr const char* kToolVersion = "1.0.0";

// FNV-1a over the bytes that determine a run's outputs.
std::uint64_t content_hash(const std::string& bytes);

// Written to the output directory before any artifact so a rerun can be
// checked against the same inputs.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::string resolved_config;  // canonical JSON of every effective parameter
  std::uint64_t seed = 0;
  std::string output_dir;

  std::uint64_t hash() const;
  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace avgps
