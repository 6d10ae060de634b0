#pragma once

// Run manifests: command line, tool version, seeds and SHA-256 digests of
// inputs and outputs; replay re-runs the command and compares digests.

#include <string>
#include <vector>

#include <json.hpp>

namespace champagne::tools {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_file(const std::string& path);

struct Manifest {
  std::string command;
  std::vector<std::string> args;  // argv without the program name
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  nlohmann::json parameters;
};

/// Writes <first output>.manifest.json with digests of every listed file.
std::string write_manifest(const Manifest& m);

/// Re-runs the recorded command with `exe` and compares output digests.
/// Returns the list of mismatching outputs (empty when byte-identical).
std::vector<std::string> replay_manifest(const std::string& manifest_path, const std::string& exe);

}  // namespace champagne::tools
