#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stochlab::experiment {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

enum class ParamType { integer, real, boolean, text, real_list, integer_list };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::real;
  std::string default_value;
  std::string help;
  std::optional<double> min;  // applies to numbers and to every list entry
  std::optional<double> max;
  bool min_exclusive = false;
  std::vector<std::string> choices;  // text only; empty means free text
};

/// Resolved parameters are kept as text so the manifest echoes exactly what ran.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";
  std::map<std::string, std::string> params;

  // Typed accessors; throw ArgumentError when the value does not parse.
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<long long> integers(const std::string& key) const;
};

class OutputSink;
using RunFn = std::function<void(const ExperimentConfig&, OutputSink&)>;
using CheckFn = std::function<void(const ExperimentConfig&, std::vector<std::string>&)>;

struct ExperimentDef {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  std::string replica_key;  // parameter that --replicas sets; empty when none
  CheckFn check;            // cross-parameter constraints, run after per-key checks
  RunFn run;
};

const std::vector<ExperimentDef>& registry();
const ExperimentDef* find_experiment(std::string_view name);
std::vector<std::string> experiment_names();

/// Defaults for every parameter. Throws ArgumentError for an unknown name.
ExperimentConfig default_config(std::string_view name);

/// Applies a key = value text. Keys before any section header and keys under
/// [run] may set seed and out; keys under [<experiment>] set parameters; other
/// sections are ignored so one file can hold several experiments. Lines starting
/// with # or ; are comments. Throws ArgumentError on malformed lines.
void apply_config_text(std::string_view text, ExperimentConfig& config);
/// Applies a run manifest: experiment must match, seed and parameters are copied.
void apply_manifest(std::string_view json_text, ExperimentConfig& config);
/// Reads a file and dispatches on content (a leading '{' means manifest).
void apply_config_file(const std::filesystem::path& file, ExperimentConfig& config);
/// key=value override.
void apply_override(std::string_view assignment, ExperimentConfig& config);

/// Never throws; each message names the offending key and constraint.
std::vector<std::string> validate(const ExperimentConfig& config);

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Collects result files for one run; every file is hashed as it is written.
class OutputSink {
 public:
  explicit OutputSink(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<OutputFile>& files() const { return files_; }
  void write(const std::string& name, const std::string& content);

 private:
  std::filesystem::path dir_;
  std::vector<OutputFile> files_;
};

struct RunManifest {
  ExperimentConfig config;
  std::string artifact_version{kArtifactVersion};
  std::string started_utc;
  std::string finished_utc;
  std::vector<OutputFile> outputs;
};

/// Validates, runs, writes outputs and manifest.json into config.output_dir.
/// Throws ArgumentError listing the violations when validation fails; errors from
/// the numerical modules propagate.
RunManifest run(const ExperimentConfig& config);

std::string manifest_json(const RunManifest& manifest);
std::string sha256_hex(std::string_view data);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Full command-line entry point; prints diagnostics to stderr.
int run_cli(int argc, char** argv);

}  // namespace stochlab::experiment
