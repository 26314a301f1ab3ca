#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "stochlab/diffusion.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/experiment.hpp"
#include "stochlab/memory.hpp"
#include "stochlab/networks.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/path_integral.hpp"
#include "stochlab/quantum.hpp"
#include "stochlab/resonance.hpp"
#include "stochlab/sandpile.hpp"
#include "stochlab/search.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::experiment {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string cell(double v) { return num(v); }
std::string cell(const std::string& v) { return v; }
std::string cell(bool v) { return v ? "1" : "0"; }
template <typename T>
  requires std::is_integral_v<T>
std::string cell(T v) { return std::to_string(v); }

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) out_ += ',';
      out_ += h;
      first = false;
    }
    out_ += '\n';
  }
  template <typename... T>
  void row(const T&... values) {
    bool first = true;
    ((out_ += (first ? "" : ","), out_ += cell(values), first = false), ...);
    out_ += '\n';
  }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

RngStream root_stream(const ExperimentConfig& c) { return RngStream(c.seed, 0); }

std::size_t count(const ExperimentConfig& c, const std::string& key) {
  return static_cast<std::size_t>(c.integer(key));
}

ParamSpec int_param(std::string key, std::string def, std::string help, double min,
                    std::optional<double> max = std::nullopt) {
  return {std::move(key), ParamType::integer, std::move(def), std::move(help), min, max, false, {}};
}
ParamSpec real_param(std::string key, std::string def, std::string help,
                     std::optional<double> min = std::nullopt, bool exclusive = false,
                     std::optional<double> max = std::nullopt) {
  return {std::move(key), ParamType::real, std::move(def), std::move(help), min, max, exclusive, {}};
}
ParamSpec positive(std::string key, std::string def, std::string help) {
  return real_param(std::move(key), std::move(def), std::move(help), 0.0, true);
}
ParamSpec choice(std::string key, std::string def, std::string help, std::vector<std::string> options) {
  return {std::move(key), ParamType::text, std::move(def), std::move(help), {}, {}, false, std::move(options)};
}
ParamSpec flag_param(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamType::boolean, std::move(def), std::move(help), {}, {}, false, {}};
}
ParamSpec list_param(std::string key, ParamType type, std::string def, std::string help,
                     std::optional<double> min = std::nullopt, bool exclusive = false,
                     std::optional<double> max = std::nullopt) {
  return {std::move(key), type, std::move(def), std::move(help), min, max, exclusive, {}};
}

std::size_t local_maxima(std::span<const double> y) {
  std::size_t n = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) ++n;
  return n;
}

// ---------------------------------------------------------------- interfere

void run_interfere(const ExperimentConfig& c, OutputSink& sink) {
  const quantum::Amplitude a(c.real("a_re"), c.real("a_im")), b(c.real("b_re"), c.real("b_im"));
  const auto s = quantum::superpose(a, b);
  Csv sup({"a_re", "a_im", "b_re", "b_im", "p_quantum", "p_classical", "interference"});
  sup.row(a.real(), a.imag(), b.real(), b.imag(), s.p_quantum, s.p_classical, s.interference);
  sink.write("superposition.csv", sup.str());

  const quantum::DoubleSlit g{c.real("wavelength"), c.real("separation"), c.real("screen_distance")};
  const std::size_t n = count(c, "points");
  const double half = c.real("x_range");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n - 1);
  const auto amp = quantum::double_slit_pattern(g, xs, quantum::SlitMode::amplitude);
  const auto cls = quantum::double_slit_pattern(g, xs, quantum::SlitMode::classical);
  Csv pattern({"x", "amplitude_intensity", "classical_intensity"});
  for (std::size_t i = 0; i < n; ++i) pattern.row(xs[i], amp[i], cls[i]);
  sink.write("double_slit.csv", pattern.str());

  const double peak = *std::max_element(amp.begin(), amp.end());
  const double first_min_x = g.wavelength * g.screen_distance / (2.0 * g.slit_separation);
  Json j;
  j["p_quantum"] = s.p_quantum;
  j["p_classical"] = s.p_classical;
  j["interference"] = s.interference;
  j["amplitude_maxima"] = local_maxima(amp);
  j["classical_maxima"] = local_maxima(cls);
  j["first_minimum_x"] = first_min_x;
  j["first_minimum_to_peak"] =
      quantum::double_slit_intensity(g, first_min_x, quantum::SlitMode::amplitude) / peak;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- decay

void run_decay(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  const quantum::DecayModel model{c.real("rate"), count(c, "atoms")};
  const auto d = quantum::decay_sample(model, rng, c.real("t_max"), count(c, "bins"));
  Csv csv({"t", "survival", "analytic"});
  for (std::size_t i = 0; i < d.times.size(); ++i)
    csv.row(d.times[i], d.survival[i], std::exp(-model.rate_lambda * d.times[i]));
  sink.write("survival.csv", csv.str());
  const double t0 = 1.0 / model.rate_lambda;
  Json j;
  j["rate"] = model.rate_lambda;
  j["atoms"] = model.n_atoms;
  j["fitted_rate"] = d.fitted_rate;
  j["fitted_rate_stderr"] = d.fitted_rate_stderr;
  j["mean_lifetime"] = d.mean_lifetime;
  j["mean_lifetime_stderr"] = d.mean_lifetime_stderr;
  j["residual_mean_lifetime_after_t0"] = json_number(quantum::residual_mean_lifetime(d.lifetimes, t0));
  j["t0"] = t0;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- uncertainty

void run_uncertainty(const ExperimentConfig& c, OutputSink& sink) {
  const quantum::Grid grid{c.real("x_min"), c.real("x_max"), count(c, "grid_n")};
  const std::size_t states = count(c, "states");
  const std::size_t comps = count(c, "max_components");
  std::vector<quantum::Uncertainty> u(states);
  const RngStream parent = root_stream(c);
  parallel_for(states, [&](std::size_t i) {
    RngStream s = parent.substream(i);
    u[i] = quantum::uncertainty_product(quantum::random_state(grid, s, comps));
  });
  Csv csv({"state", "dx", "dp", "product"});
  double min_product = INFINITY;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < states; ++i) {
    csv.row(i, u[i].dx, u[i].dp, u[i].product);
    min_product = std::min(min_product, u[i].product);
    if (u[i].product < 0.5 - 1e-3) ++violations;
  }
  sink.write("products.csv", csv.str());
  const auto g = quantum::uncertainty_product(quantum::WaveState::gaussian(grid, c.real("sigma0")));
  Json j;
  j["states"] = states;
  j["min_product"] = min_product;
  j["violations"] = violations;
  j["gaussian_dx"] = g.dx;
  j["gaussian_dp"] = g.dp;
  j["gaussian_product"] = g.product;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- spectrum

quantum::Potential spectrum_potential(const ExperimentConfig& c) {
  const std::string& kind = c.text("potential");
  const double omega = c.real("omega"), mass = c.real("mass");
  if (kind == "harmonic") return [=](double x) { return 0.5 * mass * omega * omega * x * x; };
  if (kind == "quartic") return [](double x) { return x * x * x * x; };
  return [](double) { return 0.0; };
}

void run_spectrum(const ExperimentConfig& c, OutputSink& sink) {
  const quantum::DirichletGrid grid{c.real("x_min"), c.real("x_max"), count(c, "n")};
  quantum::SpectrumOptions opt;
  opt.hbar = c.real("hbar");
  opt.mass = c.real("mass");
  opt.commuting_mode = c.flag("commuting");
  const auto s = quantum::spectrum_gaps(spectrum_potential(c), grid, count(c, "levels"), opt);
  Csv csv({"level", "energy", "gap"});
  for (std::size_t i = 0; i < s.levels.size(); ++i) csv.row(i, s.levels[i].energy, s.levels[i].gap);
  sink.write("levels.csv", csv.str());
  Json j;
  j["potential"] = c.text("potential");
  j["commuting_mode"] = opt.commuting_mode;
  j["levels"] = s.levels.size();
  j["ground_energy"] = s.levels.front().energy;
  j["max_gap"] = s.max_gap;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- paths

void run_paths(const ExperimentConfig& c, OutputSink& sink) {
  paths::EuclideanAction dyn;
  dyn.mass = c.real("mass");
  dyn.hbar = c.real("hbar");
  dyn.a_t = c.real("a_t");
  if (c.text("potential") == "harmonic") {
    const double k = dyn.mass * c.real("omega") * c.real("omega");
    dyn.potential = [k](double x) { return 0.5 * k * x * x; };
  }
  const paths::Lattice lattice{count(c, "n_t"), dyn.a_t, 0.0, 0.0};
  paths::MetropolisOptions opt;
  opt.sweeps = count(c, "sweeps");
  opt.thermalization = count(c, "thermalization");
  opt.proposal_width = c.real("proposal_width");
  const std::size_t chains = count(c, "chains");

  std::vector<paths::MetropolisResult> results(chains);
  const RngStream parent = root_stream(c);
  parallel_for(chains, [&](std::size_t i) {
    RngStream s = parent.substream(i);
    results[i] = paths::metropolis_sample(dyn, lattice, s, opt);
  });

  Csv trace({"chain", "sweep", "action"});
  std::vector<paths::LatticePath> ensemble;
  double acceptance = 0.0, width = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < chains; ++i) {
    const auto& r = results[i];
    for (std::size_t s = 0; s < r.action_trace.size(); ++s) trace.row(i, s, r.action_trace[s]);
    ensemble.insert(ensemble.end(), r.ensemble.begin(), r.ensemble.end());
    acceptance += r.acceptance / static_cast<double>(chains);
    width += r.proposal_width / static_cast<double>(chains);
    tau = std::max(tau, r.tau_int);
  }
  sink.write("action_trace.csv", trace.str());

  const auto res = paths::dyadic_resolutions(lattice, dyn, count(c, "max_block"));
  const auto scan = paths::hausdorff_scan(ensemble, res, dyn);
  Csv lengths({"dx", "block", "mean_length", "stderr"});
  for (std::size_t i = 0; i < scan.resolutions.size(); ++i)
    lengths.row(scan.resolutions[i], scan.block_sizes[i], scan.mean_lengths[i], scan.length_stderr[i]);
  sink.write("lengths.csv", lengths.str());

  std::vector<double> actions;
  for (const auto& p : ensemble) actions.push_back(paths::action(p, dyn));
  const SampleStats as = summarize(actions);
  double m3 = 0.0;
  for (double a : actions) m3 += std::pow(a - as.mean, 3);
  m3 /= static_cast<double>(actions.size());
  Json j;
  j["alpha"] = scan.alpha;
  j["d_h"] = scan.d_h;
  j["correction_terms"] = scan.correction_terms;
  j["seed"] = c.seed;
  j["potential"] = c.text("potential");
  j["n_t"] = lattice.n_t;
  j["a_t"] = lattice.a_t;
  j["chains"] = chains;
  j["ensemble_size"] = ensemble.size();
  j["acceptance"] = acceptance;
  j["proposal_width"] = width;
  j["max_tau_int"] = tau;
  j["mean_action"] = as.mean;
  j["action_skewness"] = as.variance > 0 ? m3 / std::pow(as.variance, 1.5) : 0.0;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- diffuse

diffusion::WalkSpec diffuse_base(const ExperimentConfig& c) {
  diffusion::WalkSpec s;
  s.dim = count(c, "dim");
  s.a_s = c.real("a_s");
  s.a_t = s.a_s * s.a_s / (2.0 * static_cast<double>(s.dim));
  s.n_walkers = count(c, "walkers");
  s.n_steps = static_cast<std::size_t>(std::llround(c.real("t") / s.a_t));
  return s;
}

void run_diffuse(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  const auto base = diffuse_base(c);
  const auto scan = diffusion::convergence_scan(base, count(c, "refinements"), rng);
  Csv conv({"level", "a_s", "a_t", "n_steps", "ratio", "sup_error", "max_bin_stderr", "sampling_dominated"});
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    const auto& r = scan.rows[i];
    conv.row(i, r.a_s, r.a_t, r.n_steps, r.ratio, r.sup_error, r.max_bin_stderr, r.sampling_dominated);
  }
  sink.write("convergence.csv", conv.str());

  // Axis profile of the finest level through the origin.
  const auto& f = scan.finest;
  std::vector<std::int64_t> xs;
  for (const auto& [p, n] : f.counts)
    if (p[1] == 0 && p[2] == 0) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  Csv density({"x", "density", "kernel"});
  for (auto x : xs) {
    const diffusion::LatticePoint lp{x, 0, 0};
    const diffusion::Point pt = f.position(lp);
    const auto k = diffusion::analytic_kernel(f.dim, 1.0, scan.time, std::span<const diffusion::Point>(&pt, 1));
    density.row(pt[0], f.density_at(lp), k[0]);
  }
  sink.write("density.csv", density.str());

  bool decreasing = true;
  for (std::size_t i = 1; i < scan.rows.size(); ++i)
    decreasing = decreasing && scan.rows[i].sup_error < scan.rows[i - 1].sup_error;
  Json j;
  j["dim"] = base.dim;
  j["walkers"] = base.n_walkers;
  j["time"] = scan.time;
  j["peak_density"] = scan.peak_density;
  Json errs = Json::array();
  for (const auto& r : scan.rows) errs.push_back(r.sup_error);
  j["sup_errors"] = errs;
  j["monotone_decrease"] = decreasing;
  j["final_error_over_peak"] = scan.rows.back().sup_error / scan.peak_density;
  j["coarse_over_fine"] = scan.rows.front().sup_error / scan.rows.back().sup_error;
  j["sampling_dominated_levels"] =
      std::count_if(scan.rows.begin(), scan.rows.end(), [](const auto& r) { return r.sampling_dominated; });
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- sandpile

void run_sandpile(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  RngStream drive_rng = rng.substream(0), abel_rng = rng.substream(1);
  sandpile::SandGrid grid(count(c, "width"), count(c, "height"));
  sandpile::DriveOptions opt;
  opt.n_drops = count(c, "drops");
  opt.warmup = count(c, "warmup");
  opt.policy = c.text("policy") == "center" ? sandpile::SitePolicy::center : sandpile::SitePolicy::uniform;
  const auto d = sandpile::drive(grid, drive_rng, opt);

  Csv av({"drop", "size", "area", "duration", "dissipated"});
  for (std::size_t i = 0; i < d.avalanches.size(); ++i) {
    const auto& a = d.avalanches[i];
    av.row(i, a.size, a.area, a.duration, a.dissipated);
  }
  sink.write("avalanches.csv", av.str());
  Csv act({"index", "topplings"});
  for (std::size_t i = 0; i < d.activity.size(); ++i) act.row(i, d.activity[i]);
  sink.write("activity.csv", act.str());
  const auto ps = periodogram(d.activity, 1.0, count(c, "segments"), true);
  Csv sp({"frequency", "power"});
  for (std::size_t i = 0; i < ps.power.size(); ++i) sp.row(ps.frequencies[i], ps.power[i]);
  sink.write("spectrum.csv", sp.str());

  std::size_t passed = 0;
  const std::size_t sequences = count(c, "abelian_sequences");
  const std::size_t side = count(c, "abelian_side");
  for (std::size_t s = 0; s < sequences; ++s) {
    // Random near-critical start so the drops actually trigger avalanches.
    sandpile::SandGrid g(side, side);
    for (std::size_t y = 0; y < side; ++y)
      for (std::size_t x = 0; x < side; ++x) g.set({x, y}, static_cast<int>(abel_rng.below(4)));
    std::vector<sandpile::Site> drops;
    for (std::size_t k = 0; k < count(c, "abelian_drops"); ++k)
      drops.push_back({static_cast<std::size_t>(abel_rng.below(side)),
                       static_cast<std::size_t>(abel_rng.below(side))});
    passed += sandpile::abelian_check(g, drops, abel_rng, count(c, "abelian_permutations"));
  }

  const std::size_t q = d.mean_height.size() / 4;
  double third = 0.0, fourth = 0.0;
  for (std::size_t i = 2 * q; i < 3 * q; ++i) third += d.mean_height[i];
  for (std::size_t i = 3 * q; i < 4 * q; ++i) fourth += d.mean_height[i];
  Json j;
  double mean_h = 0.0;
  for (double h : d.mean_height) mean_h += h;
  j["mean_height"] = mean_h / static_cast<double>(d.mean_height.size());
  j["stationarity_relative_change"] = q > 0 ? std::abs(fourth - third) / third : 0.0;
  const auto fit_into = [&](const char* key, double s_max) {
    try {
      const auto f = sandpile::avalanche_ccdf_fit(d.avalanches, 10.0, s_max);
      j[key] = f.exponent;
      j[std::string(key) + "_stderr"] = f.stderr;
    } catch (const FitError&) {
      j[key] = nullptr;
      j[std::string(key) + "_stderr"] = nullptr;
    }
  };
  fit_into("ccdf_slope_10_100", 100.0);
  fit_into("ccdf_slope_10_1000", 1000.0);
  j["low_high_power_ratio"] = low_high_power_ratio(ps);
  j["abelian_sequences"] = sequences;
  j["abelian_passed"] = passed;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- resonance

void run_resonance(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  auto spec = resonance::DoubleWellSpec::commensurate(
      c.real("amplitude"), c.real("omega"), 0.0, count(c, "periods"), count(c, "steps_per_period"),
      count(c, "sample_stride"));
  spec.x0 = c.real("x0");
  const auto levels = c.reals("noise_levels");
  const auto curve = resonance::resonance_scan(spec, levels, count(c, "replicas"), rng);
  Csv csv({"noise_d", "snr_db", "snr_stderr"});
  for (std::size_t i = 0; i < levels.size(); ++i) csv.row(levels[i], curve.snr_db[i], curve.snr_stderr[i]);
  sink.write("snr.csv", csv.str());
  Json j;
  j["dt"] = spec.dt;
  j["t_total"] = spec.t_total;
  j["peak_d"] = curve.peak_d;
  j["peak_snr_db"] = curve.snr_db[curve.peak_index];
  j["interior_peak"] = curve.interior_peak;
  j["margin_over_lowest_d_db"] = curve.snr_db[curve.peak_index] - curve.snr_db.front();
  j["margin_over_highest_d_db"] = curve.snr_db[curve.peak_index] - curve.snr_db.back();
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- memory

void run_memory(const ExperimentConfig& c, OutputSink& sink) {
  const RngStream parent = root_stream(c);
  const std::size_t n = count(c, "n"), p = count(c, "patterns"), trials = count(c, "trials");
  const auto flips = static_cast<std::size_t>(std::llround(c.real("corruption") * static_cast<double>(n)));
  struct Trial {
    double initial = 0.0, final_overlap = 0.0;
    std::size_t sweeps = 0;
    bool converged = false;
  };
  std::vector<Trial> rows(trials);
  const RngStream hop = parent.substream(0);
  parallel_for(trials, [&](std::size_t t) {
    RngStream s = hop.substream(t);
    std::vector<memory::SpinConfig> patterns;
    for (std::size_t k = 0; k < p; ++k) patterns.push_back(memory::random_spins(n, s));
    const auto j = memory::hebbian_couplings(patterns);
    memory::SpinConfig cue = patterns[0];
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(std::span<std::size_t>(idx), s);
    for (std::size_t i = 0; i < flips; ++i) cue[idx[i]] = -cue[idx[i]];
    const auto z = memory::zero_t_dynamics(cue, j, s, count(c, "max_sweeps"), &patterns[0]);
    rows[t] = {z.overlap_trace.front(), z.overlap_trace.back(), z.sweeps, z.converged};
  });
  Csv hcsv({"trial", "initial_overlap", "final_overlap", "sweeps", "converged"});
  std::size_t retrieved = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    hcsv.row(t, rows[t].initial, rows[t].final_overlap, rows[t].sweeps, rows[t].converged);
    retrieved += rows[t].final_overlap >= 0.95;
  }
  sink.write("hopfield.csv", hcsv.str());

  const std::size_t instances = count(c, "instances"), sk_n = count(c, "sk_n");
  const memory::AnnealSchedule sched{c.real("t_initial"), c.real("ratio"), count(c, "levels"),
                                     count(c, "sweeps")};
  std::vector<std::pair<double, double>> energies(instances);
  const RngStream sk = parent.substream(1);
  parallel_for(instances, [&](std::size_t i) {
    RngStream s = sk.substream(i);
    const auto j = memory::sk_couplings(sk_n, s);
    energies[i] = {memory::simulated_annealing(j, sched, s).energy,
                   memory::ground_state_bruteforce(j).energy};
  });
  Csv acsv({"instance", "anneal_energy", "ground_energy", "match"});
  std::size_t matched = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto [a, g] = energies[i];
    const bool match = std::abs(a - g) <= 1e-9 * std::max(1.0, std::abs(g));
    matched += match;
    acsv.row(i, a, g, match);
  }
  sink.write("anneal.csv", acsv.str());
  Json j;
  j["hopfield_trials"] = trials;
  j["hopfield_retrieved"] = retrieved;
  j["hopfield_success_fraction"] = static_cast<double>(retrieved) / static_cast<double>(trials);
  j["anneal_instances"] = instances;
  j["anneal_matches"] = matched;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- network

void run_network(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  RngStream ws = rng.substream(0), ba = rng.substream(1);
  const auto ps = c.reals("p_values");
  const auto scan = networks::small_world_scan(count(c, "n"), count(c, "k"), ps, count(c, "seeds"), ws);
  Csv sw({"p", "clustering", "path_length", "clustering_ratio", "path_ratio", "clustering_stderr", "path_stderr"});
  for (const auto& r : scan.rows)
    sw.row(r.p, r.clustering, r.path_length, r.clustering_ratio, r.path_ratio, r.clustering_stderr, r.path_stderr);
  sink.write("small_world.csv", sw.str());

  const auto g = networks::barabasi_albert(count(c, "ba_n"), count(c, "ba_m"), ba);
  const auto m = networks::metrics(g);
  Csv hist({"degree", "count"});
  for (std::size_t k = 0; k < m.degree_histogram.size(); ++k)
    if (m.degree_histogram[k] > 0) hist.row(k, m.degree_histogram[k]);
  sink.write("ba_degrees.csv", hist.str());
  std::ostringstream edges;
  networks::write_edge_list(edges, g);
  sink.write("ba_graph.edges", edges.str());

  Json j;
  j["window_found"] = scan.window_found;
  j["window_p"] = scan.window_found ? Json(scan.window_p) : Json(nullptr);
  j["path_spearman"] = scan.path_spearman;
  try {
    const auto fit = networks::degree_ccdf_fit(g, c.real("ba_k_min"), c.real("ba_k_max"));
    j["ba_ccdf_slope"] = fit.exponent;
    j["ba_ccdf_slope_stderr"] = fit.stderr;
  } catch (const FitError&) {
    j["ba_ccdf_slope"] = nullptr;
    j["ba_ccdf_slope_stderr"] = nullptr;
  }
  j["ba_clustering"] = m.clustering;
  j["ba_transitivity"] = m.transitivity;
  j["ba_edges"] = g.edge_count();
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- search

void run_search(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  std::vector<search::TournamentCell> cells;
  for (auto t : c.integers("n_targets"))
    for (double r : c.reals("radii"))
      cells.push_back({count(c, "side"), static_cast<std::size_t>(t), r, count(c, "budget")});
  const auto table = search::strategy_tournament(cells, count(c, "replicas"), rng);
  Csv csv({"side", "n_targets", "radius", "budget", "strategy", "rank", "success_probability",
           "mean_steps", "median_steps"});
  Json winners = Json::array();
  for (const auto& row : table) {
    for (const auto& s : row.strategies)
      csv.row(row.cell.side, row.cell.n_targets, row.cell.capture_radius, row.cell.step_budget, s.strategy,
              s.rank, s.success_probability, s.mean_steps, s.median_steps);
    winners.push_back({{"n_targets", row.cell.n_targets},
                       {"radius", row.cell.capture_radius},
                       {"winner", row.strategies.front().strategy}});
  }
  sink.write("tournament.csv", csv.str());
  Json j;
  j["replicas"] = count(c, "replicas");
  j["cells"] = winners;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- mcint

void run_mcint(const ExperimentConfig& c, OutputSink& sink) {
  const std::size_t dim = count(c, "dim"), samples = count(c, "samples"), replicas = count(c, "replicas");
  const std::string& kind = c.text("integrand");
  Integrand f;
  double exact = 0.0;
  const auto d = static_cast<double>(dim);
  if (kind == "gaussian") {
    f = [](std::span<const double> x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return std::exp(-r2);
    };
    exact = std::pow(0.5 * std::sqrt(std::numbers::pi) * std::erf(1.0), d);
  } else if (kind == "sphere") {
    f = [](std::span<const double> x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return r2 <= 1.0 ? 1.0 : 0.0;
    };
    exact = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) / std::pow(2.0, d);
  } else {
    f = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
    exact = d / 3.0;
  }
  std::vector<SampleStats> est(replicas);
  const RngStream parent = root_stream(c);
  parallel_for(replicas, [&](std::size_t r) {
    RngStream s = parent.substream(r);
    est[r] = mc_integrate(s, f, dim, samples);
  });
  Csv csv({"replica", "estimate", "std_error"});
  double mean = 0.0, var = 0.0;
  for (std::size_t r = 0; r < replicas; ++r) {
    csv.row(r, est[r].mean, est[r].std_error);
    mean += est[r].mean / static_cast<double>(replicas);
    var += est[r].std_error * est[r].std_error;
  }
  sink.write("estimates.csv", csv.str());
  const double se = std::sqrt(var) / static_cast<double>(replicas);
  Json j;
  j["integrand"] = kind;
  j["dim"] = dim;
  j["estimate"] = mean;
  j["std_error"] = se;
  j["exact"] = exact;
  j["z_score"] = se > 0 ? (mean - exact) / se : 0.0;
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- clt

void run_clt(const ExperimentConfig& c, OutputSink& sink) {
  RngStream rng = root_stream(c);
  std::vector<std::size_t> ns;
  for (auto v : c.integers("n_values")) ns.push_back(static_cast<std::size_t>(v));
  const std::string& kind = c.text("distribution");
  Sampler draw;
  double sigma = 1.0;
  if (kind == "uniform") {
    draw = [](RngStream& r) { return r.uniform(); };
    sigma = std::sqrt(1.0 / 12.0);
  } else if (kind == "exponential") {
    draw = [](RngStream& r) { return -std::log(r.uniform_open0()); };
  }
  const auto res = clt_scaling(rng, ns, count(c, "replicas"), draw);
  Csv csv({"n", "std_error", "expected"});
  for (const auto& row : res.rows)
    csv.row(row.n, row.std_error, sigma / std::sqrt(static_cast<double>(row.n)));
  sink.write("clt.csv", csv.str());
  Json j;
  j["distribution"] = kind;
  j["slope"] = json_number(res.slope);
  j["slope_stderr"] = json_number(res.slope_stderr);
  sink.write("summary.json", json_text(j));
}

// ---------------------------------------------------------------- registry

void need(std::vector<std::string>& out, bool ok, std::string msg) {
  if (!ok) out.push_back(std::move(msg));
}

std::vector<ExperimentDef> build_registry() {
  std::vector<ExperimentDef> r;

  r.push_back({"interfere", "amplitude superposition and the double-slit pattern",
               {real_param("a_re", "0.5", "first amplitude, real part"),
                real_param("a_im", "0", "first amplitude, imaginary part"),
                real_param("b_re", "-0.5", "second amplitude, real part"),
                real_param("b_im", "0", "second amplitude, imaginary part"),
                positive("wavelength", "1", "wavelength"),
                positive("separation", "100", "slit separation d"),
                positive("screen_distance", "1e4", "slit-screen distance L"),
                positive("x_range", "300", "detector half-width"),
                int_param("points", "2001", "detector samples", 3)},
               "", {}, run_interfere});

  r.push_back({"decay", "exponential decay of independent atoms",
               {positive("rate", "1", "decay rate lambda"),
                int_param("atoms", "1000000", "number of atoms", 10),
                positive("t_max", "5", "histogram range"),
                int_param("bins", "50", "histogram bins", 3)},
               "", {}, run_decay});

  r.push_back({"uncertainty", "position-momentum spreads of random grid states",
               {int_param("states", "1000", "random states", 1),
                int_param("grid_n", "1024", "grid points", 16),
                real_param("x_min", "-20", "grid start"),
                real_param("x_max", "20", "grid end"),
                int_param("max_components", "4", "packets per random state", 1),
                positive("sigma0", "1", "reference Gaussian width")},
               "states",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 need(out, c.real("x_max") > c.real("x_min"), "x_max: must exceed x_min");
               },
               run_uncertainty});

  r.push_back({"spectrum", "finite-difference energy levels",
               {choice("potential", "harmonic", "potential shape", {"harmonic", "box", "quartic"}),
                positive("omega", "1", "harmonic frequency"),
                positive("hbar", "1", "Planck constant"),
                positive("mass", "1", "particle mass"),
                real_param("x_min", "-10", "box start"),
                real_param("x_max", "10", "box end"),
                int_param("n", "1000", "interior grid points", 16),
                int_param("levels", "10", "levels to report", 1),
                flag_param("commuting", "false", "kinetic and potential terms commute")},
               "",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 need(out, c.real("x_max") > c.real("x_min"), "x_max: must exceed x_min");
                 need(out, c.integer("levels") <= c.integer("n") / 2, "levels: must be <= n / 2");
               },
               run_spectrum});

  r.push_back({"paths", "Euclidean path-integral sampling and path length scaling",
               {choice("potential", "free", "potential", {"free", "harmonic"}),
                positive("omega", "1", "harmonic frequency"),
                positive("mass", "1", "particle mass"),
                positive("hbar", "1", "Planck constant"),
                int_param("n_t", "256", "time intervals", 3),
                positive("a_t", "0.01", "time step"),
                int_param("sweeps", "10000", "sweeps per chain", 2),
                int_param("thermalization", "2000", "discarded sweeps", 0),
                positive("proposal_width", "0.2", "initial proposal half-width"),
                int_param("chains", "8", "independent chains", 1),
                int_param("max_block", "0", "largest decimation block (0: n_t / 2)", 0)},
               "chains",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 need(out, c.integer("sweeps") > c.integer("thermalization"),
                      "sweeps: must exceed thermalization");
                 paths::EuclideanAction dyn;
                 dyn.a_t = c.real("a_t");
                 const auto res = paths::dyadic_resolutions({count(c, "n_t"), dyn.a_t}, dyn, count(c, "max_block"));
                 need(out, res.size() >= 3 && res.front() >= 10.0 * res.back(),
                      "n_t: power-of-two blocks up to max_block must span 100 slices (one decade in dx)");
               },
               run_paths});

  r.push_back({"diffuse", "lattice random walk against the heat kernel",
               {int_param("dim", "1", "dimension", 1, 3),
                positive("a_s", "0.5", "coarsest lattice spacing"),
                int_param("walkers", "10000000", "walkers per level", 1),
                int_param("refinements", "2", "halvings of a_s", 2, 6),
                positive("t", "1", "final time")},
               "",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 const auto s = diffuse_base(c);
                 need(out, s.n_steps >= 1 && std::abs(static_cast<double>(s.n_steps) * s.a_t - c.real("t")) <=
                                                 1e-9 * c.real("t"),
                      "t: must be a whole number of steps a_s^2 / (2 dim)");
               },
               run_diffuse});

  r.push_back({"sandpile", "driven sandpile avalanches and activity spectrum",
               {int_param("width", "32", "grid width", 2), int_param("height", "32", "grid height", 2),
                int_param("drops", "100000", "recorded drops", 16),
                int_param("warmup", "10000", "discarded drops", 0),
                choice("policy", "uniform", "drop site", {"uniform", "center"}),
                int_param("segments", "16", "periodogram segments", 1),
                int_param("abelian_sequences", "100", "random drop sequences to permute", 0),
                int_param("abelian_drops", "10", "drops per sequence", 1),
                int_param("abelian_permutations", "5", "orders per sequence", 2),
                int_param("abelian_side", "16", "grid side for the order test", 2)},
               "",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 need(out, c.integer("segments") * 4 <= c.integer("drops"), "segments: too many for drops");
               },
               run_sandpile});

  r.push_back({"resonance", "stochastic resonance in a driven double well",
               {real_param("amplitude", "0.3", "drive amplitude A", 0.0),
                positive("omega", "0.1", "drive angular frequency"),
                list_param("noise_levels", ParamType::real_list, "0.02,0.05,0.1,0.2,0.4,0.8",
                           "noise intensities D", 0.0, true),
                int_param("replicas", "4", "replicas per level", 4),
                int_param("periods", "128", "drive periods per trajectory", 56),
                int_param("steps_per_period", "6290", "integration steps per period", 16),
                int_param("sample_stride", "10", "steps between samples", 1),
                real_param("x0", "1", "initial position")},
               "replicas",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 const auto levels = c.reals("noise_levels");
                 need(out, levels.size() >= 5, "noise_levels: need at least 5 levels");
                 if (!levels.empty()) {
                   const auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
                   need(out, *hi >= 10.0 * *lo, "noise_levels: must span at least one decade");
                 }
                 need(out, c.integer("periods") % 8 == 0, "periods: must be a multiple of 8 (segments)");
                 const double period = 2.0 * std::numbers::pi / c.real("omega");
                 need(out, period / static_cast<double>(c.integer("steps_per_period")) <= 0.01,
                      "steps_per_period: step must be <= 0.01");
               },
               run_resonance});

  r.push_back({"memory", "Hopfield retrieval and spin-glass annealing",
               {int_param("n", "50", "Hopfield neurons", 2),
                int_param("patterns", "2", "stored patterns", 1),
                real_param("corruption", "0.1", "fraction of cue spins flipped", 0.0, false, 0.5),
                int_param("trials", "1000", "retrieval trials", 1),
                int_param("max_sweeps", "100", "zero-temperature sweep cap", 1),
                int_param("sk_n", "16", "spin-glass size", 2, 24),
                int_param("instances", "100", "spin-glass instances", 1),
                positive("t_initial", "2", "initial temperature"),
                real_param("ratio", "0.95", "cooling ratio", 0.0, true, 0.999999),
                int_param("levels", "120", "temperature levels", 1),
                int_param("sweeps", "50", "sweeps per level", 1)},
               "trials", {}, run_memory});

  r.push_back({"network", "small-world and scale-free graphs",
               {int_param("n", "1000", "ring nodes", 4), int_param("k", "10", "ring degree", 2),
                list_param("p_values", ParamType::real_list, "0,0.001,0.003,0.01,0.03,0.1,0.3,1",
                           "rewiring probabilities", 0.0, false, 1.0),
                int_param("seeds", "10", "graphs per p", 10),
                int_param("ba_n", "10000", "scale-free nodes", 3),
                int_param("ba_m", "2", "links per new node", 1),
                positive("ba_k_min", "4", "degree fit start"),
                positive("ba_k_max", "100", "degree fit end")},
               "seeds",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 need(out, c.integer("k") % 2 == 0, "k: must be even");
                 need(out, c.integer("n") > c.integer("k"), "n: must exceed k");
                 need(out, c.integer("ba_n") > c.integer("ba_m"), "ba_n: must exceed ba_m");
                 need(out, c.real("ba_k_max") > c.real("ba_k_min"), "ba_k_max: must exceed ba_k_min");
                 const auto ps = c.reals("p_values");
                 need(out, std::find(ps.begin(), ps.end(), 0.0) != ps.end(), "p_values: must include 0");
               },
               run_network});

  r.push_back({"search", "random walk against sweep search on a torus",
               {int_param("side", "32", "torus side", 1),
                list_param("n_targets", ParamType::integer_list, "1,256", "target counts", 1.0),
                list_param("radii", ParamType::real_list, "0,1", "capture radii", 0.0),
                int_param("budget", "10240", "step budget", 0),
                int_param("replicas", "200", "arenas per cell", 100)},
               "replicas",
               [](const ExperimentConfig& c, std::vector<std::string>& out) {
                 const auto side = c.integer("side");
                 for (auto t : c.integers("n_targets"))
                   need(out, t <= side * side, "n_targets: must not exceed side^2");
               },
               run_search});

  r.push_back({"mcint", "plain Monte Carlo integration on the unit cube",
               {choice("integrand", "gaussian", "integrand", {"gaussian", "sphere", "polynomial"}),
                int_param("dim", "3", "dimension", 1, 20),
                int_param("samples", "1000000", "samples per replica", 2),
                int_param("replicas", "1", "independent estimates", 1)},
               "replicas", {}, run_mcint});

  r.push_back({"clt", "standard error of the mean against sample size",
               {list_param("n_values", ParamType::integer_list, "10,100,1000", "sample sizes", 2.0),
                int_param("replicas", "10000", "replicas per size", 2),
                choice("distribution", "normal", "draw distribution", {"normal", "uniform", "exponential"})},
               "replicas", {}, run_clt});
  return r;
}

}  // namespace

const std::vector<ExperimentDef>& registry() {
  static const std::vector<ExperimentDef> defs = build_registry();
  return defs;
}

}  // namespace stochlab::experiment
