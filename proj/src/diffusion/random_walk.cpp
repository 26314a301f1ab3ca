#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "stochlab/diffusion.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/parallel.hpp"

namespace stochlab::diffusion {
namespace {

constexpr std::size_t kBlockWalkers = 1 << 16;

void check_spec(const WalkSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3) throw ArgumentError("walk: dim must be 1, 2 or 3");
  if (!(spec.a_s > 0.0) || !(spec.a_t > 0.0)) throw DomainError("walk: a_s and a_t must be > 0");
  if (spec.n_walkers < 1) throw ArgumentError("walk: need at least one walker");
}

using CountMap = std::unordered_map<LatticePoint, std::uint64_t, LatticePointHash>;

// Final displacement of one walker. One random bit per step in 1-d, two in 2-d.
LatticePoint walk_one(std::size_t dim, std::size_t steps, RngStream& rng) {
  LatticePoint p{0, 0, 0};
  if (dim == 1) {
    std::size_t left = steps;
    while (left > 0) {
      const std::size_t take = std::min<std::size_t>(left, 64);
      std::uint64_t bits = rng.next();
      if (take < 64) bits &= (std::uint64_t{1} << take) - 1;
      p[0] += 2 * static_cast<std::int64_t>(std::popcount(bits)) - static_cast<std::int64_t>(take);
      left -= take;
    }
    return p;
  }
  if (dim == 2) {
    std::uint64_t bits = 0;
    int available = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      if (available == 0) {
        bits = rng.next();
        available = 32;
      }
      const auto dir = static_cast<unsigned>(bits & 3u);
      bits >>= 2;
      --available;
      p[dir >> 1] += (dir & 1u) ? 1 : -1;
    }
    return p;
  }
  for (std::size_t s = 0; s < steps; ++s) {
    const auto dir = static_cast<unsigned>(rng.below(6));
    p[dir >> 1] += (dir & 1u) ? 1 : -1;
  }
  return p;
}

}  // namespace

std::size_t LatticePointHash::operator()(const LatticePoint& p) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : p) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

double DiffusionField::total_mass() const {
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(n_walkers);
}

double DiffusionField::mass_at(const LatticePoint& p) const {
  const auto it = counts.find(p);
  return it == counts.end() ? 0.0
                            : static_cast<double>(it->second) / static_cast<double>(n_walkers);
}

double DiffusionField::density_at(const LatticePoint& p) const {
  const double cell = std::pow(a_s, static_cast<double>(dim)) * (n_steps > 0 ? 2.0 : 1.0);
  return mass_at(p) / cell;
}

Point DiffusionField::position(const LatticePoint& p) const {
  return {a_s * static_cast<double>(p[0] - origin[0]), a_s * static_cast<double>(p[1] - origin[1]),
          a_s * static_cast<double>(p[2] - origin[2])};
}

DiffusionField simulate_walk(const WalkSpec& spec, RngStream& rng) {
  check_spec(spec);
  const std::size_t blocks = (spec.n_walkers + kBlockWalkers - 1) / kBlockWalkers;
  std::vector<CountMap> partial(blocks);
  std::vector<std::array<double, 3>> sums(blocks), squares(blocks);
  const RngStream parent = rng;
  parallel_for(blocks, [&](std::size_t b) {
    RngStream stream = parent.substream(b);
    const std::size_t first = b * kBlockWalkers;
    const std::size_t last = std::min(spec.n_walkers, first + kBlockWalkers);
    auto& local = partial[b];
    for (std::size_t w = first; w < last; ++w) {
      const LatticePoint d = walk_one(spec.dim, spec.n_steps, stream);
      for (std::size_t a = 0; a < 3; ++a) {
        const auto v = static_cast<double>(d[a]);
        sums[b][a] += v;
        squares[b][a] += v * v;
      }
      ++local[{spec.origin[0] + d[0], spec.origin[1] + d[1], spec.origin[2] + d[2]}];
    }
  });
  rng = parent.substream(blocks);  // advance the caller's stream deterministically

  DiffusionField field;
  field.dim = spec.dim;
  field.a_s = spec.a_s;
  field.time = spec.time();
  field.d_coeff = spec.d_coeff();
  field.n_walkers = spec.n_walkers;
  field.n_steps = spec.n_steps;
  field.origin = spec.origin;
  std::array<double, 3> sum{}, sq{};
  for (std::size_t b = 0; b < blocks; ++b) {
    for (const auto& [point, count] : partial[b]) field.counts[point] += count;
    for (std::size_t a = 0; a < 3; ++a) {
      sum[a] += sums[b][a];
      sq[a] += squares[b][a];
    }
  }
  const auto n = static_cast<double>(spec.n_walkers);
  for (std::size_t a = 0; a < 3; ++a) {
    const double mean = sum[a] / n;
    field.axis_mean[a] = spec.a_s * mean;
    field.axis_variance[a] = spec.a_s * spec.a_s * std::max(0.0, sq[a] / n - mean * mean);
  }
  return field;
}

std::vector<double> analytic_kernel(std::size_t dim, double d_coeff, double t,
                                    std::span<const double> points_1d, double x0) {
  std::vector<Point> pts;
  pts.reserve(points_1d.size());
  for (double x : points_1d) pts.push_back({x, 0.0, 0.0});
  return analytic_kernel(dim, d_coeff, t, pts, {x0, 0.0, 0.0});
}

std::vector<double> analytic_kernel(std::size_t dim, double d_coeff, double t,
                                    std::span<const Point> points, const Point& x0) {
  if (!(t > 0.0)) throw DomainError("analytic_kernel: t must be > 0");
  if (!(d_coeff > 0.0)) throw DomainError("analytic_kernel: D must be > 0");
  if (dim < 1 || dim > 3) throw ArgumentError("analytic_kernel: dim must be 1, 2 or 3");
  const double norm = std::pow(4.0 * std::numbers::pi * d_coeff * t, -0.5 * static_cast<double>(dim));
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    double r2 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) r2 += (p[a] - x0[a]) * (p[a] - x0[a]);
    out.push_back(norm * std::exp(-r2 / (4.0 * d_coeff * t)));
  }
  return out;
}

ConvergenceScan convergence_scan(const WalkSpec& base, std::size_t refinements, RngStream& rng) {
  check_spec(base);
  if (refinements < 2) throw ArgumentError("convergence_scan: need at least 2 refinements");
  const double target_ratio = 2.0 * static_cast<double>(base.dim);
  if (std::abs(base.scaling_ratio() - target_ratio) > 1e-12 * target_ratio)
    throw ArgumentError("convergence_scan: base spec must satisfy a_s^2 / a_t = 2 dim");
  if (base.n_steps == 0) throw ArgumentError("convergence_scan: base spec needs n_steps > 0");

  ConvergenceScan scan;
  scan.time = base.time();
  const double sigma = std::sqrt(2.0 * scan.time);  // per axis, D = 1
  scan.peak_density = std::pow(4.0 * std::numbers::pi * scan.time, -0.5 * static_cast<double>(base.dim));

  WalkSpec spec = base;
  spec.origin = {0, 0, 0};
  for (std::size_t level = 0; level <= refinements; ++level) {
    if (level > 0) {
      spec.a_s = 0.5 * spec.a_s;
      spec.a_t = spec.a_s * spec.a_s / target_ratio;
      spec.n_steps *= 4;
    }
    RngStream level_rng = rng.substream(level);
    DiffusionField field = simulate_walk(spec, level_rng);

    const auto reach = static_cast<std::int64_t>(std::ceil(6.0 * sigma / spec.a_s));
    const auto parity = static_cast<std::int64_t>(spec.n_steps % 2);
    const std::int64_t ry = base.dim >= 2 ? reach : 0;
    const std::int64_t rz = base.dim >= 3 ? reach : 0;
    const double cell = 2.0 * std::pow(spec.a_s, static_cast<double>(base.dim));
    double sup = 0.0, worst_se = 0.0;
    for (std::int64_t i = -reach; i <= reach; ++i)
      for (std::int64_t j = -ry; j <= ry; ++j)
        for (std::int64_t k = -rz; k <= rz; ++k) {
          if (((i + j + k) % 2 + 2) % 2 != parity) continue;
          const LatticePoint lp{i, j, k};
          const Point x = field.position(lp);
          const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
          const double kernel = scan.peak_density * std::exp(-r2 / (4.0 * scan.time));
          sup = std::max(sup, std::abs(field.density_at(lp) - kernel));
          // Standard error of the bin from the kernel's own mass (not the noisy count).
          const double expected = std::min(1.0, kernel * cell);
          worst_se = std::max(worst_se, std::sqrt(expected * (1.0 - expected) /
                                                  static_cast<double>(spec.n_walkers)) / cell);
        }
    ConvergenceRow row;
    row.a_s = spec.a_s;
    row.a_t = spec.a_t;
    row.n_steps = spec.n_steps;
    row.ratio = spec.scaling_ratio();
    row.sup_error = sup;
    row.max_bin_stderr = worst_se;
    if (!scan.rows.empty()) row.sampling_dominated = worst_se > 0.25 * scan.rows.back().sup_error;
    scan.rows.push_back(row);
    if (level == refinements) scan.finest = std::move(field);
  }
  return scan;
}

}  // namespace stochlab::diffusion
