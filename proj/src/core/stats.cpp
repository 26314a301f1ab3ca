#include "stochlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stochlab/errors.hpp"
#include "stochlab/fft.hpp"

namespace stochlab {

SampleStats summarize(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("summarize: empty sample");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  SampleStats s;
  s.n = n;
  s.mean = mean;
  s.variance = n > 1 ? std::max(0.0, m2 / static_cast<double>(n - 1)) : 0.0;
  s.std_error = std::sqrt(s.variance / static_cast<double>(n));
  return s;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> ones(x.size(), 1.0);
  LinearFit fit = weighted_linear_fit(x, y, ones);
  const auto n = x.size();
  if (n < 3) {
    fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weights) {
  if (x.size() != y.size() || x.size() != weights.size())
    throw ArgumentError("linear fit: x, y and weights must have equal length");
  if (x.size() < 2) throw ArgumentError("linear fit: need at least 2 points");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += weights[i];
    sx += weights[i] * x[i];
    sy += weights[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += weights[i] * (x[i] - mx) * (x[i] - mx);
    sxy += weights[i] * (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("linear fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("fit_power_law: x and y differ in length");
  if (x.size() < 3) throw ArgumentError("fit_power_law: need at least 3 points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("fit_power_law: data must be strictly positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const LinearFit lf = linear_fit(lx, ly);
  return {lf.slope, lf.slope_stderr, std::exp(lf.intercept)};
}

PowerLawFit ccdf_fit(std::span<const double> values, double x_min, double x_max,
                     std::size_t points) {
  if (!(x_min > 0.0) || !(x_max > x_min) || points < 3)
    throw ArgumentError("ccdf_fit: need 0 < x_min < x_max and >= 3 points");
  if (values.empty()) throw ArgumentError("ccdf_fit: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs, ys;
  const double step = std::log(x_max / x_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x_min * std::exp(step * static_cast<double>(i));
    const auto tail = static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x));
    if (tail > 0.0) {
      xs.push_back(x);
      ys.push_back(tail / static_cast<double>(sorted.size()));
    }
  }
  if (xs.size() < 3) throw FitError("ccdf_fit: fewer than 3 populated points");
  return fit_power_law(xs, ys);
}

CltResult clt_scaling(RngStream& rng, std::span<const std::size_t> n_values, std::size_t replicas,
                      const Sampler& draw) {
  if (n_values.empty()) throw ArgumentError("clt_scaling: n_values is empty");
  if (replicas < 2) throw ArgumentError("clt_scaling: need at least 2 replicas");
  for (auto n : n_values)
    if (n < 2) throw ArgumentError("clt_scaling: every n must be >= 2");
  const Sampler sampler = draw ? draw : Sampler([](RngStream& r) { return r.normal(); });

  CltResult result;
  std::vector<double> means(replicas);
  for (auto n : n_values) {
    for (auto& m : means) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += sampler(rng);
      m = acc / static_cast<double>(n);
    }
    result.rows.push_back({n, std::sqrt(summarize(means).variance)});
  }
  result.slope = std::numeric_limits<double>::quiet_NaN();
  result.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  if (result.rows.size() >= 2) {
    std::vector<double> lx, ly;
    for (const auto& row : result.rows) {
      if (!(row.std_error > 0.0)) return result;  // degenerate input: no slope
      lx.push_back(std::log(static_cast<double>(row.n)));
      ly.push_back(std::log(row.std_error));
    }
    const LinearFit lf = linear_fit(lx, ly);
    result.slope = lf.slope;
    result.slope_stderr = lf.slope_stderr;
  }
  return result;
}

PowerSpectrum periodogram(std::span<const double> signal, double sample_step,
                          std::size_t segments, bool remove_mean) {
  if (segments < 1) throw ArgumentError("periodogram: segments must be >= 1");
  if (signal.size() < 2 * segments)
    throw ArgumentError("periodogram: signal shorter than 2 samples per segment");
  if (!(sample_step > 0.0)) throw DomainError("periodogram: sample_step must be > 0");

  const std::size_t m = signal.size() / segments;
  const std::size_t bins = m / 2 + 1;
  PowerSpectrum spectrum;
  spectrum.segment_count = segments;
  spectrum.segment_length = m;
  spectrum.power.assign(bins, 0.0);
  spectrum.frequencies.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    spectrum.frequencies[k] = static_cast<double>(k) / (static_cast<double>(m) * sample_step);

  std::vector<double> segment(m);
  const double norm = 1.0 / (static_cast<double>(m) * static_cast<double>(m) *
                             static_cast<double>(segments));
  for (std::size_t s = 0; s < segments; ++s) {
    std::copy_n(signal.begin() + static_cast<std::ptrdiff_t>(s * m), m, segment.begin());
    if (remove_mean) {
      const double mean = std::accumulate(segment.begin(), segment.end(), 0.0) /
                          static_cast<double>(m);
      for (auto& v : segment) v -= mean;
    }
    const auto coeffs = fft::forward_real(segment);
    for (std::size_t k = 0; k < bins; ++k) {
      // Interior bins carry their negative-frequency twin.
      const bool unpaired = k == 0 || (m % 2 == 0 && k == m / 2);
      spectrum.power[k] += (unpaired ? 1.0 : 2.0) * std::norm(coeffs[k]) * norm;
    }
  }
  return spectrum;
}

double low_high_power_ratio(const PowerSpectrum& spectrum, double fraction) {
  const std::size_t usable = spectrum.power.size() - 1;  // skip DC
  const auto band = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                  std::floor(fraction * static_cast<double>(usable))));
  if (usable < 2 * band) throw ArgumentError("low_high_power_ratio: spectrum too short");
  double low = 0.0, high = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    low += spectrum.power[1 + i];
    high += spectrum.power[spectrum.power.size() - 1 - i];
  }
  return low / high;
}

SampleStats mc_integrate(RngStream& rng, const Integrand& f, std::size_t dim,
                         std::size_t samples) {
  if (dim < 1) throw ArgumentError("mc_integrate: dim must be >= 1");
  if (samples < 2) throw ArgumentError("mc_integrate: need at least 2 samples");
  std::vector<double> point(dim);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t n = 1; n <= samples; ++n) {
    for (auto& c : point) c = rng.uniform();
    const double v = f(point);
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  SampleStats s;
  s.n = samples;
  s.mean = mean;
  s.variance = std::max(0.0, m2 / static_cast<double>(samples - 1));
  s.std_error = std::sqrt(s.variance / static_cast<double>(samples));
  return s;
}

double integrated_autocorrelation_time(std::span<const double> series, double window_c) {
  const auto n = series.size();
  if (n < 4) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (!(c0 > 0.0)) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < n / 2; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (series[i] - mean) * (series[i + t] - mean);
    ct /= static_cast<double>(n - t);
    tau += ct / c0;
    if (static_cast<double>(t) >= window_c * tau) break;
  }
  return std::max(tau, 0.5);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median: empty input");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("spearman: need paired samples");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace stochlab
