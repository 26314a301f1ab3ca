#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/quantum.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::quantum {

Superposition superpose(Amplitude a, Amplitude b) {
  Superposition s;
  s.amplitude = a + b;
  s.p_quantum = std::norm(s.amplitude);
  s.p_classical = std::norm(a) + std::norm(b);
  s.interference = 2.0 * (std::conj(a) * b).real();
  return s;
}

namespace {

void check_geometry(const DoubleSlit& g) {
  if (!(g.wavelength > 0.0) || !(g.slit_separation > 0.0) || !(g.screen_distance > 0.0))
    throw DomainError("double slit: wavelength, slit separation and screen distance must be > 0");
}

}  // namespace

double double_slit_intensity(const DoubleSlit& g, double x, SlitMode mode) {
  check_geometry(g);
  const double k = 2.0 * std::numbers::pi / g.wavelength;
  const double half = 0.5 * g.slit_separation;
  const double r_upper = std::hypot(g.screen_distance, x - half);
  const double r_lower = std::hypot(g.screen_distance, x + half);
  const Amplitude upper = std::polar(g.screen_distance / r_upper, k * r_upper);
  const Amplitude lower = std::polar(g.screen_distance / r_lower, k * r_lower);
  return mode == SlitMode::amplitude ? std::norm(upper + lower)
                                     : std::norm(upper) + std::norm(lower);
}

std::vector<double> double_slit_pattern(const DoubleSlit& g, std::span<const double> xs,
                                        SlitMode mode) {
  check_geometry(g);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(double_slit_intensity(g, x, mode));
  return out;
}

DecaySample decay_sample(const DecayModel& model, RngStream& rng, double t_max, std::size_t bins) {
  if (!(model.rate_lambda > 0.0)) throw DomainError("decay_sample: rate must be > 0");
  if (!(t_max > 0.0)) throw DomainError("decay_sample: t_max must be > 0");
  if (bins < 2) throw ArgumentError("decay_sample: need at least 2 bins");
  if (model.n_atoms < 2) throw ArgumentError("decay_sample: need at least 2 atoms");

  DecaySample out;
  out.lifetimes.resize(model.n_atoms);
  for (auto& t : out.lifetimes) t = -std::log(rng.uniform_open0()) / model.rate_lambda;

  const double width = t_max / static_cast<double>(bins);
  std::vector<std::size_t> decays(bins, 0);
  std::size_t beyond = 0;
  for (double t : out.lifetimes) {
    const auto b = static_cast<std::size_t>(t / width);
    if (b < bins)
      ++decays[b];
    else
      ++beyond;
  }
  out.times.resize(bins + 1);
  out.survival.resize(bins + 1);
  std::size_t alive = model.n_atoms;
  const auto total = static_cast<double>(model.n_atoms);
  for (std::size_t i = 0; i <= bins; ++i) {
    out.times[i] = width * static_cast<double>(i);
    out.survival[i] = static_cast<double>(alive) / total;
    if (i < bins) alive -= decays[i];
  }

  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < bins; ++i) {
    if (decays[i] < 5) continue;
    x.push_back(out.times[i]);
    y.push_back(std::log(static_cast<double>(decays[i])));
    w.push_back(static_cast<double>(decays[i]));  // Var(log N) ~ 1/N
  }
  if (x.size() < 2) throw FitError("decay_sample: fewer than 2 populated bins to fit");
  const LinearFit fit = weighted_linear_fit(x, y, w);
  out.fitted_rate = -fit.slope;
  out.fitted_rate_stderr = fit.slope_stderr;

  const SampleStats life = summarize(out.lifetimes);
  out.mean_lifetime = life.mean;
  out.mean_lifetime_stderr = life.std_error;
  return out;
}

double residual_mean_lifetime(std::span<const double> lifetimes, double t0) {
  double acc = 0.0;
  std::size_t count = 0;
  for (double t : lifetimes) {
    if (t > t0) {
      acc += t - t0;
      ++count;
    }
  }
  if (count == 0) throw ArgumentError("residual_mean_lifetime: no survivors past t0");
  return acc / static_cast<double>(count);
}

}  // namespace stochlab::quantum
