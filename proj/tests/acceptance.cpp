// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <json.hpp>
#include <unistd.h>

#include "stochlab/experiment.hpp"
#include "stochlab/memory.hpp"
#include "stochlab/path_integral.hpp"
#include "stochlab/quantum.hpp"
#include "stochlab/rng.hpp"

using namespace stochlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  experiment::RunManifest manifest;
  fs::path dir;
  double seconds = 0.0;
  json summary;
};

fs::path g_root;
int g_failures = 0;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run_default(const std::string& name, const std::string& tag,
                const std::vector<std::string>& overrides = {}) {
  auto c = experiment::default_config(name);
  for (const auto& o : overrides) experiment::apply_override(o, c);
  c.output_dir = g_root / tag;
  Run r;
  r.dir = c.output_dir;
  const auto start = std::chrono::steady_clock::now();
  r.manifest = experiment::run(c);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.summary = json::parse(slurp(r.dir / "summary.json"));
  return r;
}

void report(int id, const char* title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "error: " << e.what();
  }
  if (!ok) ++g_failures;
  std::printf("%s %2d %-22s %s\n", ok ? "PASS" : "FAIL", id, title, detail.str().c_str());
  std::fflush(stdout);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

int main() {
  g_root = fs::temp_directory_path() / ("stochlab-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(g_root);
  fs::create_directories(g_root);
  std::map<std::string, Run> runs;

  report(1, "hausdorff-dimension", [&](std::ostringstream& d) {
    runs["paths"] = run_default("paths", "paths");
    const Run harmonic = run_default("paths", "paths-harmonic", {"potential=harmonic"});
    const double free_dh = runs["paths"].summary["d_h"];
    const double ho_dh = harmonic.summary["d_h"];
    const paths::EuclideanAction dyn{1.0, {}, 0.01, 1.0};
    const paths::Lattice lat{256, 0.01, 0.0, 0.0};
    const std::vector<paths::LatticePath> line{paths::LatticePath::ramp(256, 0.01, 0.0, 3.0)};
    const double line_dh = paths::hausdorff_scan(line, paths::dyadic_resolutions(lat, dyn), dyn).d_h;
    const double seconds = runs["paths"].seconds + harmonic.seconds;
    d << "free d_H=" << free_dh << " harmonic d_H=" << ho_dh << " line d_H=" << line_dh
      << " (" << seconds << " s)";
    return std::abs(free_dh - 2.0) <= 0.1 && std::abs(ho_dh - 2.0) <= 0.1 &&
           std::abs(line_dh - 1.0) <= 0.05 && runs["paths"].seconds <= 120 && harmonic.seconds <= 120;
  });

  report(2, "interference-contrast", [&](std::ostringstream& d) {
    runs["interfere"] = run_default("interfere", "interfere");
    const quantum::DoubleSlit g{};
    const auto amp = [&](double x) { return quantum::double_slit_intensity(g, x, quantum::SlitMode::amplitude); };
    const auto cls = [&](double x) { return quantum::double_slit_intensity(g, x, quantum::SlitMode::classical); };
    const std::size_t n = 6001;
    const double lo = -300.0, hi = 300.0, h = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> xs(n), ia(n), ic(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = lo + h * static_cast<double>(i);
      ia[i] = amp(xs[i]);
      ic[i] = cls(xs[i]);
    }
    std::size_t amp_max = 0, cls_max = 0;
    double peak = 0.0, worst_min = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, ia[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      amp_max += ia[i] > ia[i - 1] && ia[i] > ia[i + 1];
      cls_max += ic[i] > ic[i - 1] && ic[i] > ic[i + 1];
      if (ia[i] < ia[i - 1] && ia[i] <= ia[i + 1]) {
        const auto m = boost::math::tools::brent_find_minima(amp, xs[i - 1], xs[i + 1], 52);
        worst_min = std::max(worst_min, m.second / peak);
      }
    }
    d << "amplitude maxima=" << amp_max << " worst minimum/peak=" << worst_min
      << " classical maxima=" << cls_max;
    return amp_max >= 3 && worst_min < 1e-6 && cls_max == 1;
  });

  report(3, "diffusion-equivalence", [&](std::ostringstream& d) {
    runs["diffuse"] = run_default("diffuse", "diffuse");
    const auto& s = runs["diffuse"].summary;
    const auto errors = s["sup_errors"].get<std::vector<double>>();
    bool decreasing = errors.size() == 3;
    for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
    const double rel = s["final_error_over_peak"];
    d << "walkers=" << s["walkers"] << " sup errors=" << s["sup_errors"].dump()
      << " final/peak=" << rel << " (" << runs["diffuse"].seconds << " s)";
    return decreasing && rel < 1e-2 && s["walkers"] == 10000000 && runs["diffuse"].seconds <= 60;
  });

  report(4, "uncertainty-bound", [&](std::ostringstream& d) {
    runs["uncertainty"] = run_default("uncertainty", "uncertainty");
    const auto& s = runs["uncertainty"].summary;
    const double min_product = s["min_product"];
    const double gaussian = s["gaussian_product"];
    d << "states=" << s["states"] << " min product=" << min_product << " gaussian=" << gaussian;
    return s["states"] == 1000 && min_product >= 0.5 - 1e-3 && std::abs(gaussian - 0.5) <= 1e-3;
  });

  report(5, "spin-glass-annealing", [&](std::ostringstream& d) {
    runs["memory"] = run_default("memory", "memory");
    const auto& s = runs["memory"].summary;
    RngStream rng(5, 0);
    const auto j = memory::sk_couplings(12, rng);
    double worst = 0.0;
    for (double t : {0.3, 1.0, 3.0}) {
      const double beta = 1.0 / t, h = 1e-4 * beta;
      const double fd = -(memory::exact_thermo(j, 1.0 / (beta + h)).log_z -
                          memory::exact_thermo(j, 1.0 / (beta - h)).log_z) / (2.0 * h);
      const double e = memory::exact_thermo(j, t).mean_energy;
      worst = std::max(worst, std::abs(fd - e) / std::abs(e));
    }
    d << "annealing matches=" << s["anneal_matches"] << "/" << s["anneal_instances"]
      << " energy identity rel err=" << worst << " (" << runs["memory"].seconds << " s)";
    return s["anneal_instances"] == 100 && s["anneal_matches"].get<int>() >= 95 && worst <= 1e-4 &&
           runs["memory"].seconds <= 180;
  });

  report(6, "hopfield-retrieval", [&](std::ostringstream& d) {
    const auto& s = runs.at("memory").summary;
    const double frac = s["hopfield_success_fraction"];
    d << "retrieved " << s["hopfield_retrieved"] << "/" << s["hopfield_trials"] << " (overlap >= 0.95)";
    return s["hopfield_trials"] == 1000 && frac >= 0.95;
  });

  report(7, "sandpile-criticality", [&](std::ostringstream& d) {
    runs["sandpile"] = run_default("sandpile", "sandpile");
    const auto& s = runs["sandpile"].summary;
    if (s["ccdf_slope_10_100"].is_null()) {
      d << "CCDF fit failed";
      return false;
    }
    const double slope = s["ccdf_slope_10_100"], se = s["ccdf_slope_10_100_stderr"];
    const double ratio = s["low_high_power_ratio"];
    d << "abelian " << s["abelian_passed"] << "/" << s["abelian_sequences"] << " CCDF slope=" << slope
      << " stderr=" << se << " low/high power=" << ratio << " (" << runs["sandpile"].seconds << " s)";
    return s["abelian_sequences"] == 100 && s["abelian_passed"] == 100 && slope < 0 && se < 0.1 &&
           ratio >= 10 && runs["sandpile"].seconds <= 60;
  });

  report(8, "stochastic-resonance", [&](std::ostringstream& d) {
    runs["resonance"] = run_default("resonance", "resonance");
    const auto& s = runs["resonance"].summary;
    const double lo = s["margin_over_lowest_d_db"], hi = s["margin_over_highest_d_db"];
    d << "peak at D=" << s["peak_d"] << " margins " << lo << " / " << hi << " dB ("
      << runs["resonance"].seconds << " s)";
    return s["interior_peak"] == true && lo >= 3 && hi >= 3 && runs["resonance"].seconds <= 120;
  });

  report(9, "small-world-window", [&](std::ostringstream& d) {
    runs["network"] = run_default("network", "network");
    const auto rows = read_csv(runs["network"].dir / "small_world.csv");
    std::string hits;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double p = std::stod(rows[i][0]);
      const double c_ratio = std::stod(rows[i][3]), l_ratio = std::stod(rows[i][4]);
      if (p >= 0.01 && p <= 0.1 && l_ratio < 0.5 && c_ratio > 0.7) hits += (hits.empty() ? "" : ",") + rows[i][0];
    }
    const auto& s = runs["network"].summary;
    const bool slope_ok = s["ba_ccdf_slope"].is_number() && s["ba_ccdf_slope"] >= -2.2 &&
                          s["ba_ccdf_slope"] <= -1.6;
    d << "window p=" << (hits.empty() ? "none" : hits) << " BA slope=" << s["ba_ccdf_slope"] << " ("
      << runs["network"].seconds << " s)";
    return !hits.empty() && slope_ok && runs["network"].seconds <= 60;
  });

  report(10, "clt-slope", [&](std::ostringstream& d) {
    runs["clt"] = run_default("clt", "clt");
    const double slope = runs["clt"].summary["slope"];
    d << "slope=" << slope;
    return std::abs(slope + 0.5) <= 0.05;
  });

  report(11, "manifest-replay", [&](std::ostringstream& d) {
    for (const auto& name : experiment::experiment_names())
      if (!runs.count(name)) runs[name] = run_default(name, name);
    std::size_t files = 0;
    std::string bad;
    for (const auto& [name, first] : runs) {
      auto c = experiment::default_config(name);
      experiment::apply_config_file(first.dir / "manifest.json", c);
      c.output_dir = g_root / (name + "-replay");
      const auto again = experiment::run(c);
      for (const auto& out : first.manifest.outputs) {
        ++files;
        if (slurp(first.dir / out.name) != slurp(c.output_dir / out.name)) bad += " " + name + "/" + out.name;
      }
      if (again.outputs.size() != first.manifest.outputs.size()) bad += " " + name + "(count)";
    }
    d << runs.size() << " experiments, " << files << " data files"
      << (bad.empty() ? " byte-identical" : " differ:" + bad);
    return runs.size() == experiment::experiment_names().size() && bad.empty();
  });

  fs::remove_all(g_root);
  std::printf("%s: %d failing\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
  return g_failures == 0 ? 0 : 1;
}
