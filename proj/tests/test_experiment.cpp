#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "stochlab/errors.hpp"
#include "stochlab/experiment.hpp"

using namespace stochlab;
using namespace stochlab::experiment;
namespace fs = std::filesystem;

namespace {

// Small configurations so every experiment runs in well under a second.
const std::map<std::string, std::vector<std::string>>& quick_overrides() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"interfere", {"points=201"}},
      {"decay", {"atoms=20000"}},
      {"uncertainty", {"states=20", "grid_n=256"}},
      {"spectrum", {"n=400", "levels=3"}},
      {"paths", {"sweeps=300", "thermalization=50", "chains=2"}},
      {"diffuse", {"walkers=20000"}},
      {"sandpile", {"width=8", "height=8", "drops=3000", "warmup=200", "abelian_sequences=3"}},
      {"resonance", {"periods=56"}},
      {"memory", {"trials=20", "instances=3", "sk_n=10", "levels=30", "sweeps=10"}},
      {"network", {"n=100", "k=4", "ba_n=300", "ba_k_min=2", "ba_k_max=30"}},
      {"search", {"side=8", "n_targets=1,16", "budget=640", "replicas=100"}},
      {"mcint", {"samples=2000", "replicas=2"}},
      {"clt", {"replicas=300"}},
  };
  return m;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("stochlab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig quick(const std::string& name, const fs::path& out, std::uint64_t seed = 2024) {
  auto c = default_config(name);
  for (const auto& o : quick_overrides().at(name)) apply_override(o, c);
  c.seed = seed;
  c.output_dir = out;
  return c;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stochlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("registry lists the thirteen experiments") {
  const std::vector<std::string> expected{"interfere", "decay", "uncertainty", "spectrum", "paths",
                                          "diffuse", "sandpile", "resonance", "memory", "network",
                                          "search", "mcint", "clt"};
  CHECK(experiment_names() == expected);
}

TEST_CASE("default configs validate") {
  for (const auto& name : experiment_names()) {
    INFO(name);
    CHECK(validate(default_config(name)).empty());
  }
}

TEST_CASE("validation messages") {
  auto c = default_config("uncertainty");
  c.params["sigma0"] = "-1";
  const auto v = validate(c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rfind("sigma0:", 0) == 0);

  c = default_config("decay");
  c.params["colour"] = "blue";
  CHECK(validate(c).at(0).find("colour") != std::string::npos);

  ExperimentConfig unknown;
  unknown.experiment = "teleport";
  const auto u = validate(unknown);
  REQUIRE(u.size() == 1);
  for (const auto& name : experiment_names()) CHECK(u[0].find(name) != std::string::npos);
  CHECK_THROWS_AS(default_config("teleport"), ArgumentError);

  c = default_config("network");
  c.params["k"] = "5";
  CHECK(validate(c).at(0).rfind("k:", 0) == 0);
  c = default_config("resonance");
  c.params["noise_levels"] = "0.1,0.2,0.3,0.4,0.5";
  CHECK(validate(c).at(0).rfind("noise_levels:", 0) == 0);
  c = default_config("paths");
  c.params["n_t"] = "64";
  CHECK(validate(c).at(0).rfind("n_t:", 0) == 0);
  c = default_config("spectrum");
  c.params["potential"] = "cubic";
  CHECK(validate(c).at(0).rfind("potential:", 0) == 0);
  c = default_config("decay");
  c.params["atoms"] = "many";
  CHECK(validate(c).at(0).rfind("atoms:", 0) == 0);
}

TEST_CASE("config text and overrides") {
  auto c = default_config("decay");
  apply_config_text("# comment\n[run]\nseed = 77\nout = somewhere\n[decay]\natoms = 1e4\n[clt]\nreplicas = 5\n", c);
  CHECK(c.seed == 77);
  CHECK(c.output_dir == fs::path("somewhere"));
  CHECK(c.integer("atoms") == 10000);
  CHECK(c.params.count("replicas") == 0);
  CHECK_THROWS_AS(apply_config_text("atoms = 5\n", c), ArgumentError);
  CHECK_THROWS_AS(apply_config_text("[decay\n", c), ArgumentError);
  CHECK_THROWS_AS(apply_override("atoms", c), ArgumentError);
  apply_override("seed=18446744073709551615", c);
  CHECK(c.seed == 18446744073709551615ull);
}

TEST_CASE("interfere writes the destructive pair") {
  TempDir dir;
  const auto m = run(quick("interfere", dir.path));
  const std::string csv = slurp(dir.path / "superposition.csv");
  CHECK(csv == "a_re,a_im,b_re,b_im,p_quantum,p_classical,interference\n0.5,0,-0.5,0,0,0.5,-0.5\n");
  CHECK(m.outputs.size() == 3);
}

TEST_CASE("manifest digests match the files") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  TempDir dir;
  run(quick("decay", dir.path));
  const auto j = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(j["artifact_version"] == kArtifactVersion);
  CHECK(j["config"]["experiment"] == "decay");
  CHECK(j["config"]["parameters"]["atoms"] == "20000");
  REQUIRE(j["outputs"].size() == 2);
  for (const auto& f : j["outputs"]) {
    const std::string body = slurp(dir.path / f["file"].get<std::string>());
    CHECK(f["sha256"] == sha256_hex(body));
    CHECK(f["bytes"] == body.size());
  }
}

TEST_CASE("seed determines every output; rerun from manifest is byte-identical") {
  const fs::path golden_file = fs::path(STOCHLAB_GOLDEN_DIR) / "digests.txt";
  const bool write_golden = std::getenv("STOCHLAB_WRITE_GOLDEN") != nullptr;
  std::map<std::string, std::string> golden;
  {
    std::ifstream in(golden_file);
    std::string key, digest;
    while (in >> key >> digest) golden[key] = digest;
  }
  std::ostringstream fresh;
  for (const auto& name : experiment_names()) {
    INFO(name);
    TempDir a, b, c;
    const auto first = run(quick(name, a.path));
    // Rerun from the echoed manifest alone.
    auto again = default_config(name);
    apply_config_file(a.path / "manifest.json", again);
    again.output_dir = b.path;
    const auto second = run(again);
    const auto other = run(quick(name, c.path, 2025));
    REQUIRE(first.outputs.size() == second.outputs.size());
    bool any_differs = false;
    for (std::size_t i = 0; i < first.outputs.size(); ++i) {
      CHECK(first.outputs[i].name == second.outputs[i].name);
      CHECK(first.outputs[i].sha256 == second.outputs[i].sha256);
      CHECK(slurp(a.path / first.outputs[i].name) == slurp(b.path / second.outputs[i].name));
      any_differs = any_differs || first.outputs[i].sha256 != other.outputs[i].sha256;
      const std::string key = name + "/" + first.outputs[i].name;
      fresh << key << " " << first.outputs[i].sha256 << "\n";
      if (!write_golden) {
        INFO(key);
        CHECK(golden[key] == first.outputs[i].sha256);
      }
    }
    if (name != "interfere" && name != "spectrum") CHECK(any_differs);
  }
  if (write_golden) {
    std::ofstream out(golden_file);
    out << fresh.str();
  }
}

TEST_CASE("command line exit codes") {
  TempDir dir;
  const std::string out = (dir.path / "run").string();
  CHECK(cli({"decay", "--out", out, "atoms=1000"}) == kExitOk);
  CHECK(fs::exists(dir.path / "run" / "manifest.json"));
  CHECK(cli({"decay", "--out", out, "atoms=-3"}) == kExitUsage);
  CHECK(cli({"decay", "--out", out, "bogus=1"}) == kExitUsage);
  CHECK(cli({"teleport"}) == kExitUsage);
  CHECK(cli({"decay", "--replicas", "4"}) == kExitUsage);
  CHECK(cli({"decay", "--config", (dir.path / "missing.cfg").string()}) == kExitUsage);
  CHECK(cli({"--seed", "3"}) == kExitUsage);
  // Grid too coarse for the requested levels: numerical failure.
  CHECK(cli({"spectrum", "--out", out, "n=20", "levels=8"}) == kExitRuntime);

  // --replicas maps onto the replica parameter, and a manifest replays it.
  CHECK(cli({"clt", "--out", out, "--seed", "9", "--replicas", "50"}) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir.path / "run" / "manifest.json"));
  CHECK(j["config"]["seed"] == 9);
  CHECK(j["config"]["parameters"]["replicas"] == "50");
  const std::string before = slurp(dir.path / "run" / "clt.csv");
  fs::copy_file(dir.path / "run" / "manifest.json", dir.path / "m.json");
  const std::string out2 = (dir.path / "rerun").string();
  CHECK(cli({"clt", "--config", (dir.path / "m.json").string(), "--out", out2}) == kExitOk);
  CHECK(slurp(dir.path / "rerun" / "clt.csv") == before);
}

TEST_CASE("default paths run reports d_h near two") {
  TempDir dir;
  auto c = default_config("paths");
  c.output_dir = dir.path;
  run(c);
  const auto j = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  const double d_h = j["d_h"];
  CHECK(d_h >= 1.9);
  CHECK(d_h <= 2.1);
  CHECK(j["seed"] == 42);
  CHECK(j["n_t"] == 256);
}
