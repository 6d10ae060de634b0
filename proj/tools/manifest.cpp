#include "manifest.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "champagne/config_io.hpp"

namespace champagne::tools {

using nlohmann::json;

std::string sha256_file(const std::string& path) {
  const std::string data = read_text_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed for " + path);
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string write_manifest(const Manifest& m) {
  if (m.outputs.empty()) throw std::runtime_error("manifest: no outputs");
  json j;
  j["command"] = m.command;
  j["args"] = m.args;
  j["tool_version"] = kToolVersion;
  j["parameters"] = m.parameters;
  json in = json::object(), out = json::object();
  for (const auto& p : m.inputs) in[p] = sha256_file(p);
  for (const auto& p : m.outputs) out[p] = sha256_file(p);
  j["inputs"] = std::move(in);
  j["outputs"] = std::move(out);
  const std::string path = m.outputs.front() + ".manifest.json";
  write_text_file(path, j.dump(2) + "\n");
  return path;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

}  // namespace

std::vector<std::string> replay_manifest(const std::string& manifest_path, const std::string& exe) {
  const json j = json::parse(read_text_file(manifest_path));
  for (const auto& [path, digest] : j.at("inputs").items()) {
    if (sha256_file(path) != digest.get<std::string>()) {
      throw std::runtime_error("replay: input " + path + " changed since the recorded run");
    }
  }
  std::string cmd = shell_quote(exe);
  for (const auto& a : j.at("args")) cmd += " " + shell_quote(a.get<std::string>());
  cmd += " > /dev/null";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("replay: command failed: " + cmd);
  std::vector<std::string> mismatched;
  for (const auto& [path, digest] : j.at("outputs").items()) {
    if (sha256_file(path) != digest.get<std::string>()) mismatched.push_back(path);
  }
  return mismatched;
}

}  // namespace champagne::tools
