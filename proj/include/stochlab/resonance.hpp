#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::resonance {

/// Overdamped particle in V(x) = x^4/4 - x^2/2 with drive A sin(omega t) and
/// noise intensity D: dx = (x - x^3 + A sin(omega t)) dt + sqrt(2 D dt) N(0,1).
struct DoubleWellSpec {
  double amplitude = 0.3;
  double omega = 0.1;
  double noise_d = 0.1;
  double dt = 0.01;
  double t_total = 100.0;
  double x0 = 1.0;
  std::size_t sample_stride = 10;  // keep every stride-th step

  std::size_t steps() const;
  /// Step chosen so one drive period is exactly `steps_per_period` steps, and
  /// t_total covers `periods` whole periods.
  static DoubleWellSpec commensurate(double amplitude, double omega, double noise_d,
                                     std::size_t periods, std::size_t steps_per_period = 6290,
                                     std::size_t sample_stride = 10);
};

struct Trajectory {
  double sample_step = 0.0;  // x[i] is the state at t = i * sample_step
  std::vector<double> x;
};

/// Euler-Maruyama. Throws ArgumentError for dt <= 0, noise_d < 0 or t_total < dt,
/// and IntegrationError once |x| exceeds 1e3 (step too large).
Trajectory integrate(const DoubleWellSpec& spec, RngStream& rng);

/// Periodogram power in the drive bin over the median of bins k +- 2..6, in dB,
/// from `segments` (>= 8) equal segments. Throws ArgumentError when omega / 2 pi
/// is more than 1% of a bin off the spectral grid or too close to either end.
double snr_at_drive(const Trajectory& trajectory, double omega, std::size_t segments = 8);
double snr_at_drive(std::span<const double> signal, double sample_step, double omega,
                    std::size_t segments = 8);

struct SnrCurve {
  std::vector<double> noise_levels;
  std::vector<double> snr_db;      // mean over replicas
  std::vector<double> snr_stderr;  // standard error of that mean
  double peak_d = 0.0;
  std::size_t peak_index = 0;
  /// Peak is neither end point and beats both ends by at least 3 dB.
  bool interior_peak = false;
};

/// Throws ArgumentError for fewer than 5 levels, a span under one decade, or
/// fewer than 4 replicas. Replica r of level i runs on substream i * replicas + r.
SnrCurve resonance_scan(const DoubleWellSpec& base, std::span<const double> noise_levels,
                        std::size_t replicas, RngStream& rng);

/// Mean time between well changes, with a change registered when x crosses
/// -threshold after the last visit to +threshold or vice versa. Returns 0 when no
/// change occurs.
double mean_residence_time(const Trajectory& trajectory, double threshold = 0.5);

}  // namespace stochlab::resonance
