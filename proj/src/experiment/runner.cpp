#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "stochlab/errors.hpp"
#include "stochlab/experiment.hpp"

namespace stochlab::experiment {
namespace {

std::string describe_experiments() {
  std::string out = "experiments:\n";
  for (const auto& def : registry()) {
    out += "  " + def.name + std::string(def.name.size() < 12 ? 12 - def.name.size() : 1, ' ') + def.summary + "\n";
  }
  return out;
}

void print_params(const ExperimentDef& def) {
  std::cout << def.name << ": " << def.summary << "\n";
  for (const auto& p : def.params) std::cout << "  " << p.key << " = " << p.default_value << "  (" << p.help << ")\n";
  if (!def.replica_key.empty()) std::cout << "  --replicas sets " << def.replica_key << "\n";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"stochastic-dynamics experiment runner"};
  app.footer(describe_experiments());
  std::string name;
  std::vector<std::string> assignments;
  std::optional<std::string> config_file, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  bool show_params = false;

  app.add_option("experiment", name, "experiment to run")->required();
  app.add_option("assignments", assignments, "parameter overrides as key=value");
  app.add_option("--config", config_file, "key = value config file or a previous manifest.json");
  app.add_option("--seed", seed, "64-bit master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--replicas", replicas, "fan-out count for the experiment's replica parameter");
  app.add_flag("--params", show_params, "list the experiment's parameters and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ExperimentConfig config;
  try {
    const ExperimentDef* def = find_experiment(name);
    if (def == nullptr) {
      std::cerr << "unknown experiment '" << name << "'\n" << describe_experiments();
      return kExitUsage;
    }
    if (show_params) {
      print_params(*def);
      return kExitOk;
    }
    config = default_config(name);
    if (config_file) apply_config_file(*config_file, config);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (replicas) {
      if (def->replica_key.empty()) {
        if (*replicas != 1) {
          std::cerr << "--replicas: experiment '" << name << "' has no replica parameter\n";
          return kExitUsage;
        }
      } else {
        config.params[def->replica_key] = std::to_string(*replicas);
      }
    }
    for (const auto& a : assignments) apply_override(a, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto violations = validate(config);
  if (!violations.empty()) {
    std::cerr << "invalid configuration for '" << name << "':\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kExitUsage;
  }

  try {
    const RunManifest m = run(config);
    std::cout << "wrote " << (config.output_dir / "manifest.json").string() << "\n";
    for (const auto& f : m.outputs) std::cout << "  " << f.name << "  " << f.bytes << " bytes  " << f.sha256 << "\n";
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace stochlab::experiment
