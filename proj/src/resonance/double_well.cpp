#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/resonance.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::resonance {

std::size_t DoubleWellSpec::steps() const {
  return static_cast<std::size_t>(std::llround(t_total / dt));
}

DoubleWellSpec DoubleWellSpec::commensurate(double amplitude, double omega, double noise_d,
                                            std::size_t periods, std::size_t steps_per_period,
                                            std::size_t sample_stride) {
  if (!(omega > 0.0) || periods == 0 || steps_per_period == 0)
    throw ArgumentError("commensurate: omega, periods and steps_per_period must be > 0");
  DoubleWellSpec s;
  s.amplitude = amplitude;
  s.omega = omega;
  s.noise_d = noise_d;
  const double period = 2.0 * std::numbers::pi / omega;
  s.dt = period / static_cast<double>(steps_per_period);
  s.t_total = period * static_cast<double>(periods);
  s.sample_stride = sample_stride;
  return s;
}

Trajectory integrate(const DoubleWellSpec& spec, RngStream& rng) {
  if (!(spec.dt > 0.0)) throw ArgumentError("integrate: dt must be > 0");
  if (!(spec.noise_d >= 0.0)) throw ArgumentError("integrate: noise_d must be >= 0");
  if (!(spec.t_total >= spec.dt)) throw ArgumentError("integrate: t_total must cover one step");
  if (spec.sample_stride == 0) throw ArgumentError("integrate: sample_stride must be >= 1");
  const std::size_t n = spec.steps();
  const double kick = std::sqrt(2.0 * spec.noise_d * spec.dt);
  Trajectory tr;
  tr.sample_step = spec.dt * static_cast<double>(spec.sample_stride);
  tr.x.reserve(n / spec.sample_stride + 1);
  double x = spec.x0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % spec.sample_stride == 0) tr.x.push_back(x);
    const double t = static_cast<double>(i) * spec.dt;
    double next = x + (x - x * x * x + spec.amplitude * std::sin(spec.omega * t)) * spec.dt;
    if (kick > 0.0) next += kick * rng.normal();
    x = next;
    if (!(std::abs(x) <= 1e3))
      throw IntegrationError("integrate: |x| exceeded 1e3; reduce dt");
  }
  return tr;
}

double snr_at_drive(std::span<const double> signal, double sample_step, double omega,
                    std::size_t segments) {
  if (segments < 8) throw ArgumentError("snr_at_drive: need at least 8 segments");
  if (!(sample_step > 0.0) || !(omega > 0.0))
    throw ArgumentError("snr_at_drive: sample_step and omega must be > 0");
  const std::size_t m = signal.size() / segments;
  if (m < 16) throw ArgumentError("snr_at_drive: trajectory too short for 8 segments");
  const double bin = omega / (2.0 * std::numbers::pi) * static_cast<double>(m) * sample_step;
  const double k_real = std::round(bin);
  if (std::abs(bin - k_real) > 0.01)
    throw ArgumentError("snr_at_drive: drive frequency does not fall on a spectral bin");
  const auto k = static_cast<std::size_t>(k_real);
  const PowerSpectrum ps = periodogram(signal, sample_step, segments, true);
  if (k < 7 || k + 6 >= ps.power.size())
    throw ArgumentError("snr_at_drive: drive bin too close to the spectrum edge");
  std::vector<double> background;
  for (std::size_t d = 2; d <= 6; ++d) {
    background.push_back(ps.power[k - d]);
    background.push_back(ps.power[k + d]);
  }
  const double floor = std::max(median(background), 1e-300);
  return 10.0 * std::log10(std::max(ps.power[k], 1e-300) / floor);
}

double snr_at_drive(const Trajectory& trajectory, double omega, std::size_t segments) {
  return snr_at_drive(trajectory.x, trajectory.sample_step, omega, segments);
}

SnrCurve resonance_scan(const DoubleWellSpec& base, std::span<const double> noise_levels,
                        std::size_t replicas, RngStream& rng) {
  if (noise_levels.size() < 5) throw ArgumentError("resonance_scan: need at least 5 noise levels");
  const auto [lo, hi] = std::minmax_element(noise_levels.begin(), noise_levels.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo)
    throw ArgumentError("resonance_scan: noise levels must be positive and span one decade");
  if (replicas < 4) throw ArgumentError("resonance_scan: need at least 4 replicas");

  const std::size_t levels = noise_levels.size();
  std::vector<double> snr(levels * replicas);
  const RngStream parent = rng;
  parallel_for(snr.size(), [&](std::size_t job) {
    DoubleWellSpec spec = base;
    spec.noise_d = noise_levels[job / replicas];
    RngStream stream = parent.substream(job);
    snr[job] = snr_at_drive(integrate(spec, stream), spec.omega);
  });
  rng = parent.substream(snr.size());

  SnrCurve curve;
  curve.noise_levels.assign(noise_levels.begin(), noise_levels.end());
  for (std::size_t i = 0; i < levels; ++i) {
    const SampleStats st = summarize(std::span<const double>(snr.data() + i * replicas, replicas));
    curve.snr_db.push_back(st.mean);
    curve.snr_stderr.push_back(st.std_error);
  }
  curve.peak_index = static_cast<std::size_t>(
      std::max_element(curve.snr_db.begin(), curve.snr_db.end()) - curve.snr_db.begin());
  curve.peak_d = curve.noise_levels[curve.peak_index];
  const double peak = curve.snr_db[curve.peak_index];
  curve.interior_peak = curve.peak_index > 0 && curve.peak_index + 1 < levels &&
                        peak >= curve.snr_db.front() + 3.0 && peak >= curve.snr_db.back() + 3.0;
  return curve;
}

double mean_residence_time(const Trajectory& trajectory, double threshold) {
  if (!(threshold > 0.0)) throw ArgumentError("mean_residence_time: threshold must be > 0");
  int well = 0;
  std::size_t last_switch = 0, switches = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < trajectory.x.size(); ++i) {
    const double x = trajectory.x[i];
    const int side = x >= threshold ? 1 : (x <= -threshold ? -1 : 0);
    if (side == 0 || side == well) continue;
    if (well != 0) {
      if (switches > 0) total += static_cast<double>(i - last_switch) * trajectory.sample_step;
      ++switches;
      last_switch = i;
    } else {
      last_switch = i;
    }
    well = side;
  }
  // The first switch only anchors the clock; residence times are between switches.
  return switches > 1 ? total / static_cast<double>(switches - 1) : 0.0;
}

}  // namespace stochlab::resonance
