#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::diffusion {

using LatticePoint = std::array<std::int64_t, 3>;  // unused axes stay 0
using Point = std::array<double, 3>;

struct WalkSpec {
  std::size_t dim = 1;
  double a_s = 0.1;
  double a_t = 0.005;
  std::size_t n_walkers = 100000;
  std::size_t n_steps = 200;
  LatticePoint origin{0, 0, 0};

  double scaling_ratio() const { return a_s * a_s / a_t; }
  // Per-axis variance per step is a_s^2 / dim, so D = a_s^2 / (2 dim a_t);
  // the ratio a_s^2 / a_t = 2 dim gives D = 1.
  double d_coeff() const { return a_s * a_s / (2.0 * static_cast<double>(dim) * a_t); }
  double time() const { return a_t * static_cast<double>(n_steps); }
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const;
};

/// Walker occupation on the unbounded lattice, stored sparsely.
struct DiffusionField {
  std::size_t dim = 1;
  double a_s = 0.0;
  double time = 0.0;
  double d_coeff = 0.0;
  std::size_t n_walkers = 0;
  std::size_t n_steps = 0;
  LatticePoint origin{0, 0, 0};
  std::unordered_map<LatticePoint, std::uint64_t, LatticePointHash> counts;
  std::array<double, 3> axis_mean{};      // displacement in length units
  std::array<double, 3> axis_variance{};  // about the origin's sample mean

  double total_mass() const;  // sum of counts / n_walkers
  double mass_at(const LatticePoint& p) const;
  /// Occupation density at p. Only sites with the walk's parity are reachable,
  /// so each reachable site stands for a cell of volume 2 a_s^dim (a_s^dim before
  /// the first step).
  double density_at(const LatticePoint& p) const;
  Point position(const LatticePoint& p) const;
};

/// Each walker picks one of the 2 dim signed axis directions uniformly per step.
/// Walkers are simulated in fixed blocks, each on its own substream, and
/// merged by integer addition, so the result does not depend on thread count.
DiffusionField simulate_walk(const WalkSpec& spec, RngStream& rng);

/// (4 pi D t)^(-dim/2) exp(-|x - x0|^2 / (4 D t)) at each point. Throws
/// DomainError for t <= 0 or D <= 0.
std::vector<double> analytic_kernel(std::size_t dim, double d_coeff, double t,
                                    std::span<const double> points_1d, double x0 = 0.0);
std::vector<double> analytic_kernel(std::size_t dim, double d_coeff, double t,
                                    std::span<const Point> points, const Point& x0 = {});

struct ConvergenceRow {
  double a_s = 0.0;
  double a_t = 0.0;
  std::size_t n_steps = 0;
  double ratio = 0.0;
  double sup_error = 0.0;
  double max_bin_stderr = 0.0;
  bool sampling_dominated = false;
};

struct ConvergenceScan {
  std::vector<ConvergenceRow> rows;
  double time = 0.0;
  double peak_density = 0.0;
  DiffusionField finest;  // field of the last level
};

/// Level 0 is the base spec; each of `refinements` further levels halves a_s and
/// sets a_t = a_s^2 / (2 dim) (D = 1), keeping t fixed. The base spec must
/// already satisfy the ratio. Errors are sup-norm differences between the
/// walk density and the kernel over reachable sites within 6 standard
/// deviations. A level is flagged as sampling dominated when its largest bin
/// standard error exceeds a quarter of the previous level's error (the O(a_s^2)
/// discretization estimate).
ConvergenceScan convergence_scan(const WalkSpec& base, std::size_t refinements, RngStream& rng);

}  // namespace stochlab::diffusion
