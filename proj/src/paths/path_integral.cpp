#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "stochlab/errors.hpp"
#include "stochlab/path_integral.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::paths {
namespace {

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void check_dynamics(const EuclideanAction& d) {
  if (!(d.mass > 0.0) || !(d.a_t > 0.0) || !(d.hbar > 0.0))
    throw DomainError("action: mass, a_t and hbar must be > 0");
}

}  // namespace

LatticePath LatticePath::constant(std::size_t n_t, double a_t, double value) {
  return LatticePath{a_t, std::vector<double>(n_t + 1, value)};
}

LatticePath LatticePath::ramp(std::size_t n_t, double a_t, double from, double to) {
  LatticePath p{a_t, std::vector<double>(n_t + 1)};
  for (std::size_t j = 0; j <= n_t; ++j)
    p.x[j] = from + (to - from) * static_cast<double>(j) / static_cast<double>(n_t);
  return p;
}

double action(const LatticePath& path, const EuclideanAction& dynamics) {
  check_dynamics(dynamics);
  if (path.x.size() < 2) throw ArgumentError("action: path needs at least 2 positions");
  if (!same_step(path.a_t, dynamics.a_t)) throw ArgumentError("action: path and action a_t differ");
  const double k = dynamics.mass / (2.0 * dynamics.a_t);
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t j = 0; j + 1 < path.x.size(); ++j) {
    const double d = path.x[j + 1] - path.x[j];
    kinetic += d * d;
  }
  if (dynamics.potential) {
    for (std::size_t j = 1; j + 1 < path.x.size(); ++j) potential += dynamics.v(path.x[j]);
    potential += 0.5 * (dynamics.v(path.x.front()) + dynamics.v(path.x.back()));
  }
  return k * kinetic + dynamics.a_t * potential;
}

double path_distance(const LatticePath& p1, const LatticePath& p2, const EuclideanAction& dynamics) {
  if (p1.x.size() != p2.x.size() || !same_step(p1.a_t, p2.a_t))
    throw ArgumentError("path_distance: incompatible lattices");
  return std::abs(action(p1, dynamics) - action(p2, dynamics));
}

MetropolisResult metropolis_sample(const EuclideanAction& dynamics, const Lattice& lattice,
                                   RngStream& rng, const MetropolisOptions& options) {
  check_dynamics(dynamics);
  if (lattice.n_t < 3) throw ArgumentError("metropolis_sample: n_t must be >= 3");
  if (!same_step(lattice.a_t, dynamics.a_t))
    throw ArgumentError("metropolis_sample: lattice and action a_t differ");
  if (options.sweeps <= options.thermalization)
    throw ArgumentError("metropolis_sample: sweeps must exceed thermalization");
  if (!(options.proposal_width > 0.0))
    throw ArgumentError("metropolis_sample: proposal_width must be > 0");

  const std::size_t n = lattice.n_t;
  const double a_t = lattice.a_t;
  const double hbar = dynamics.hbar;
  const double k = dynamics.mass / (2.0 * a_t);

  LatticePath path = LatticePath::ramp(n, a_t, lattice.x_start, lattice.x_end);
  if (options.warm_start) {
    const double step_sd = std::sqrt(hbar * a_t / dynamics.mass);
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) w[j] = w[j - 1] + step_sd * rng.normal();
    for (std::size_t j = 1; j < n; ++j)
      path.x[j] += w[j] - w[n] * static_cast<double>(j) / static_cast<double>(n);
  }

  MetropolisResult result;
  result.action_trace.reserve(options.sweeps);
  double width = options.proposal_width;
  std::size_t window_accepted = 0, window_tried = 0;
  std::size_t accepted = 0, tried = 0;
  std::vector<std::vector<double>> kept;
  kept.reserve(options.sweeps - options.thermalization);

  double s = action(path, dynamics);
  for (std::size_t sweep = 0; sweep < options.sweeps; ++sweep) {
    const bool measuring = sweep >= options.thermalization;
    for (std::size_t j = 1; j < n; ++j) {
      const double xl = path.x[j - 1], xr = path.x[j + 1], old = path.x[j];
      const double proposed = old + width * (2.0 * rng.uniform() - 1.0);
      const double ds = k * ((proposed - xl) * (proposed - xl) + (xr - proposed) * (xr - proposed) -
                             (old - xl) * (old - xl) - (xr - old) * (xr - old)) +
                        a_t * (dynamics.v(proposed) - dynamics.v(old));
      const double u = rng.uniform();
      const bool accept = ds <= 0.0 || u < std::exp(-ds / hbar);
      if (accept) {
        path.x[j] = proposed;
        s += ds;
      }
      if (measuring) {
        ++tried;
        accepted += accept;
        if (result.proposals.size() < options.audit_proposals)
          result.proposals.push_back({ds / hbar, u, accept});
      } else {
        ++window_tried;
        window_accepted += accept;
      }
    }
    if (sweep % 64 == 63) s = action(path, dynamics);  // keep the running sum from drifting
    result.action_trace.push_back(s);
    if (!measuring && options.tune_width && sweep % 10 == 9) {
      const double rate = static_cast<double>(window_accepted) / static_cast<double>(window_tried);
      width *= std::clamp(rate / 0.5, 0.5, 2.0);
      window_accepted = window_tried = 0;
    }
    if (measuring) kept.push_back(path.x);
  }

  result.proposal_width = width;
  result.acceptance = static_cast<double>(accepted) / static_cast<double>(tried);
  const std::span<const double> post(result.action_trace.data() + options.thermalization,
                                     options.sweeps - options.thermalization);
  result.tau_int = post.size() >= 4 ? integrated_autocorrelation_time(post) : 0.5;
  result.stride = options.stride > 0
                      ? options.stride
                      : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * result.tau_int)));
  for (std::size_t i = 0; i < kept.size(); i += result.stride)
    result.ensemble.push_back(LatticePath{a_t, std::move(kept[i])});
  return result;
}

HausdorffScan hausdorff_scan(std::span<const LatticePath> ensemble,
                             std::span<const double> resolutions, const EuclideanAction& dynamics) {
  check_dynamics(dynamics);
  if (ensemble.empty()) throw ArgumentError("hausdorff_scan: empty ensemble");
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (!(resolutions[i] > 0.0)) throw DomainError("hausdorff_scan: resolutions must be > 0");
    if (i > 0 && !(resolutions[i] < resolutions[i - 1]))
      throw ArgumentError("hausdorff_scan: resolutions must be strictly decreasing");
  }
  if (resolutions.size() < 2 || resolutions.front() < 10.0 * resolutions.back())
    throw ArgumentError("hausdorff_scan: resolutions must span at least one decade");
  const std::size_t n = ensemble.front().n_t();
  for (const auto& p : ensemble)
    if (p.n_t() != n || !same_step(p.a_t, dynamics.a_t))
      throw ArgumentError("hausdorff_scan: ensemble paths must share the action's lattice");

  HausdorffScan scan;
  const double unit = dynamics.hbar * dynamics.a_t / dynamics.mass;
  for (double dx : resolutions) {
    const auto b = static_cast<std::size_t>(std::llround(dx * dx / unit));
    if (b == 0 || n % b != 0 || n / b < 2) continue;
    if (!scan.block_sizes.empty() && scan.block_sizes.back() == b) continue;
    std::vector<double> lengths;
    lengths.reserve(ensemble.size());
    for (const auto& p : ensemble) {
      double len = 0.0;
      for (std::size_t j = 0; j + b <= n; j += b) len += std::abs(p.x[j + b] - p.x[j]);
      lengths.push_back(len);
    }
    const SampleStats st = summarize(lengths);
    if (!(st.mean > 0.0)) continue;
    scan.block_sizes.push_back(b);
    scan.resolutions.push_back(std::sqrt(unit * static_cast<double>(b)));
    scan.mean_lengths.push_back(st.mean);
    scan.length_stderr.push_back(st.std_error);
  }
  const std::size_t m = scan.resolutions.size();
  if (m < 3) throw FitError("hausdorff_scan: fewer than 3 usable resolutions");

  scan.correction_terms = std::min<std::size_t>(2, m - 3);
  const double dx_max = scan.resolutions.front();
  Eigen::MatrixXd a(m, 2 + scan.correction_terms);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = scan.resolutions[i];
    a(i, 0) = 1.0;
    a(i, 1) = std::log(r);
    const double u = (r / dx_max) * (r / dx_max);
    double term = 1.0;
    for (std::size_t c = 0; c < scan.correction_terms; ++c) {
      term *= u;
      a(i, 2 + c) = term;
    }
    y(i) = std::log(scan.mean_lengths[i]);
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  scan.alpha = coef(1);
  scan.d_h = 1.0 - scan.alpha;
  return scan;
}

std::vector<double> dyadic_resolutions(const Lattice& lattice, const EuclideanAction& dynamics,
                                       std::size_t max_block) {
  check_dynamics(dynamics);
  const std::size_t cap = max_block > 0 ? max_block : lattice.n_t / 2;
  std::vector<std::size_t> blocks;
  for (std::size_t b = 1; b <= cap && lattice.n_t % b == 0 && lattice.n_t / b >= 2; b *= 2)
    blocks.push_back(b);
  std::vector<double> out;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    out.push_back(std::sqrt(dynamics.hbar * lattice.a_t * static_cast<double>(*it) / dynamics.mass));
  return out;
}

}  // namespace stochlab::paths
