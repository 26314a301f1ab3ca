#include <algorithm>
#include <cmath>

#include "stochlab/errors.hpp"
#include "stochlab/sandpile.hpp"

namespace stochlab::sandpile {

SandGrid::SandGrid(std::size_t width, std::size_t height, int threshold)
    : width_(width), height_(height), threshold_(threshold), cells_(width * height, 0) {
  if (width == 0 || height == 0) throw ArgumentError("SandGrid: dimensions must be > 0");
  if (threshold < 4) throw ArgumentError("SandGrid: threshold must be >= 4");
}

std::size_t SandGrid::index(Site s) const {
  if (s.x >= width_ || s.y >= height_) throw ArgumentError("SandGrid: site out of range");
  return s.y * width_ + s.x;
}

void SandGrid::set(Site s, int grains) {
  if (grains < 0) throw DomainError("SandGrid: heights must be >= 0");
  int& c = cells_[index(s)];
  total_ += grains - c;
  c = grains;
}

double SandGrid::mean_height() const {
  return static_cast<double>(total_) / static_cast<double>(cells_.size());
}

bool SandGrid::stable() const {
  return std::all_of(cells_.begin(), cells_.end(), [&](int h) { return h < threshold_; });
}

bool SandGrid::operator==(const SandGrid& other) const {
  return width_ == other.width_ && height_ == other.height_ && threshold_ == other.threshold_ &&
         cells_ == other.cells_;
}

struct Relaxer {
  static Avalanche drop(SandGrid& g, Site site, std::vector<double>* rounds) {
    const std::size_t i = g.index(site);
    g.cells_[i] += 1;
    g.total_ += 1;
    return run(g, i, rounds);
  }

  static Avalanche run(SandGrid& g, std::size_t start, std::vector<double>* rounds) {
    Avalanche av;
    const int th = g.threshold_;
    const std::size_t w = g.width_, h = g.height_;
    auto& c = g.cells_;
    if (c[start] < th) return av;
    std::vector<std::size_t> current{start}, next;
    std::vector<std::uint32_t> queued(c.size(), 0), toppled(c.size(), 0);
    std::uint32_t round = 0;
    while (!current.empty()) {
      ++round;
      next.clear();
      std::uint64_t count = 0;
      auto push = [&](std::size_t i) {
        if (c[i] >= th && queued[i] != round) {
          queued[i] = round;
          next.push_back(i);
        }
      };
      for (std::size_t i : current) {
        c[i] -= 4;
        ++count;
        if (!toppled[i]) {
          toppled[i] = 1;
          ++av.area;
        }
        const std::size_t x = i % w, y = i / w;
        std::uint64_t lost = 0;
        if (x > 0) ++c[i - 1]; else ++lost;
        if (x + 1 < w) ++c[i + 1]; else ++lost;
        if (y > 0) ++c[i - w]; else ++lost;
        if (y + 1 < h) ++c[i + w]; else ++lost;
        av.dissipated += lost;
      }
      // Cells become unstable only through this round's topplings, so scanning
      // the toppled cells and their neighbours finds the whole next front.
      for (std::size_t i : current) {
        const std::size_t x = i % w, y = i / w;
        push(i);
        if (x > 0) push(i - 1);
        if (x + 1 < w) push(i + 1);
        if (y > 0) push(i - w);
        if (y + 1 < h) push(i + w);
      }
      av.size += count;
      ++av.duration;
      if (rounds) rounds->push_back(static_cast<double>(count));
      current.swap(next);
    }
    g.total_ -= static_cast<std::int64_t>(av.dissipated);
    return av;
  }
};

Avalanche drop_and_relax(SandGrid& grid, Site site, std::vector<double>* round_activity) {
  return Relaxer::drop(grid, site, round_activity);
}

namespace {

Site pick(const SandGrid& grid, RngStream& rng, SitePolicy policy) {
  if (policy == SitePolicy::center) return {grid.width() / 2, grid.height() / 2};
  return {static_cast<std::size_t>(rng.below(grid.width())),
          static_cast<std::size_t>(rng.below(grid.height()))};
}

}  // namespace

DriveResult drive(SandGrid& grid, RngStream& rng, const DriveOptions& options) {
  if (options.n_drops == 0) throw ArgumentError("drive: n_drops must be >= 1");
  for (std::size_t d = 0; d < options.warmup; ++d) drop_and_relax(grid, pick(grid, rng, options.policy));
  DriveResult out;
  out.avalanches.reserve(options.n_drops);
  out.topplings_per_drop.reserve(options.n_drops);
  out.mean_height.reserve(options.n_drops);
  for (std::size_t d = 0; d < options.n_drops; ++d) {
    out.activity.push_back(0.0);
    const Avalanche av = drop_and_relax(grid, pick(grid, rng, options.policy), &out.activity);
    out.avalanches.push_back(av);
    out.topplings_per_drop.push_back(static_cast<double>(av.size));
    out.mean_height.push_back(grid.mean_height());
  }
  return out;
}

bool abelian_check(const SandGrid& grid, std::span<const Site> drops, RngStream& rng,
                   std::size_t permutations) {
  if (permutations < 2) throw ArgumentError("abelian_check: permutations must be >= 2");
  std::vector<Site> order(drops.begin(), drops.end());
  SandGrid reference = grid;
  for (const Site& s : order) drop_and_relax(reference, s);
  for (std::size_t p = 1; p < permutations; ++p) {
    shuffle(std::span<Site>(order), rng);
    SandGrid trial = grid;
    for (const Site& s : order) drop_and_relax(trial, s);
    if (!(trial == reference)) return false;
  }
  return true;
}

PowerLawFit avalanche_ccdf_fit(std::span<const Avalanche> avalanches, double s_min, double s_max,
                               std::size_t points) {
  std::vector<double> sizes;
  for (const auto& a : avalanches)
    if (a.size > 0) sizes.push_back(static_cast<double>(a.size));
  if (sizes.empty()) throw FitError("avalanche_ccdf_fit: no nonzero avalanches");
  return ccdf_fit(sizes, s_min, s_max, points);
}

}  // namespace stochlab::sandpile
