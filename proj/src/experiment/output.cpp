#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "stochlab/errors.hpp"
#include "stochlab/experiment.hpp"

namespace stochlab::experiment {
namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

OutputSink::OutputSink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputSink::write(const std::string& name, const std::string& content) {
  if (name.empty() || name.find('/') != std::string::npos || name == "manifest.json")
    throw ArgumentError("OutputSink: invalid file name '" + name + "'");
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  files_.push_back({name, sha256_hex(content), content.size()});
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config.params) params[k] = v;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& f : m.outputs)
    outputs.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  nlohmann::ordered_json j;
  j["artifact"] = "stochlab";
  j["artifact_version"] = m.artifact_version;
  j["config"] = {{"experiment", m.config.experiment},
                 {"seed", m.config.seed},
                 {"output_dir", m.config.output_dir.string()},
                 {"parameters", params}};
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config) {
  const auto violations = validate(config);
  if (!violations.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ArgumentError(msg);
  }
  RunManifest manifest;
  manifest.config = config;
  manifest.started_utc = utc_now();
  OutputSink sink(config.output_dir);
  find_experiment(config.experiment)->run(config, sink);
  manifest.finished_utc = utc_now();
  manifest.outputs = sink.files();
  std::ofstream out(config.output_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest_json(manifest);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  return manifest;
}

}  // namespace stochlab::experiment
