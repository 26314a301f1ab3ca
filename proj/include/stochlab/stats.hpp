#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab {

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1) estimator; 0 when n == 1
  double std_error = 0.0;  // sqrt(variance / n)
};

/// Welford one-pass moments. Throws ArgumentError on empty input.
SampleStats summarize(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points with
/// distinct x; the slope stderr is only finite with >= 3 points.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);
/// Weighted least squares with weights w_i = 1 / var(y_i); slope stderr from the
/// weights themselves (model-based).
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weights);

struct PowerLawFit {
  double exponent = 0.0;
  double stderr = 0.0;
  double prefactor = 0.0;
};

/// Log-log least squares y ~ prefactor * x^exponent. Ordinary (unweighted) fit on
/// the logs, so multiplicative noise is handled well and additive noise near
/// zero biases the exponent. Throws DomainError for non-positive data and
/// ArgumentError for fewer than 3 points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Log-log fit of the empirical complementary CDF P(X >= x) at `points`
/// log-spaced x in [x_min, x_max]. Points with empty tails are skipped; throws
/// FitError when fewer than 3 remain and ArgumentError for a bad range.
PowerLawFit ccdf_fit(std::span<const double> values, double x_min, double x_max,
                     std::size_t points = 16);

struct CltRow {
  std::size_t n = 0;
  double std_error = 0.0;  // spread of the n-sample mean across replicas
};

struct CltResult {
  std::vector<CltRow> rows;
  double slope = 0.0;         // d log(std_error) / d log(n); NaN with < 2 sizes
  double slope_stderr = 0.0;
};

using Sampler = std::function<double(RngStream&)>;

/// Empirical standard deviation of the mean of n draws, over `replicas` replicas,
/// for every n in n_values, plus the fitted log-log slope. Default draws are N(0,1).
CltResult clt_scaling(RngStream& rng, std::span<const std::size_t> n_values, std::size_t replicas,
                      const Sampler& draw = {});

struct PowerSpectrum {
  std::vector<double> frequencies;
  std::vector<double> power;
  std::size_t segment_count = 0;
  std::size_t segment_length = 0;
};

/// One-sided periodogram averaged over `segments` equal, non-overlapping,
/// rectangular-window segments (trailing samples that do not fill a segment are
/// dropped). Normalized so sum(power) equals the mean square of the transformed
/// samples; with remove_mean each segment is de-meaned first.
PowerSpectrum periodogram(std::span<const double> signal, double sample_step,
                          std::size_t segments, bool remove_mean = false);

/// Mean power of the lowest `fraction` of non-DC bins divided by the mean power
/// of the highest `fraction` of bins.
double low_high_power_ratio(const PowerSpectrum& spectrum, double fraction = 0.1);

using Integrand = std::function<double(std::span<const double>)>;

/// Plain Monte Carlo estimate of the integral of f over [0,1]^dim.
SampleStats mc_integrate(RngStream& rng, const Integrand& f, std::size_t dim,
                         std::size_t samples);

/// Integrated autocorrelation time tau = 1/2 + sum_t rho(t), with Sokal's
/// automatic window (stop at the first t >= c * tau).
double integrated_autocorrelation_time(std::span<const double> series, double window_c = 5.0);

double median(std::vector<double> values);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace stochlab
