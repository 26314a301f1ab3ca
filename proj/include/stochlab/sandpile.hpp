#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stochlab/rng.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::sandpile {

struct Site {
  std::size_t x = 0;
  std::size_t y = 0;
  bool operator==(const Site&) const = default;
};

/// Bak-Tang-Wiesenfeld grid with open edges: a cell holding >= threshold grains
/// sends one grain to each von Neumann neighbour; grains pushed off the edge are lost.
class SandGrid {
 public:
  SandGrid(std::size_t width, std::size_t height, int threshold = 4);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  int threshold() const { return threshold_; }
  int at(Site s) const { return cells_[index(s)]; }
  void set(Site s, int grains);
  std::span<const int> cells() const { return cells_; }
  std::int64_t total_grains() const { return total_; }
  double mean_height() const;
  bool stable() const;
  bool operator==(const SandGrid& other) const;

 private:
  friend struct Relaxer;
  std::size_t index(Site s) const;

  std::size_t width_, height_;
  int threshold_;
  std::vector<int> cells_;
  std::int64_t total_ = 0;
};

struct Avalanche {
  std::uint64_t size = 0;        // topplings
  std::uint64_t area = 0;        // distinct cells that toppled
  std::uint64_t duration = 0;    // parallel rounds
  std::uint64_t dissipated = 0;  // grains lost over the edge
};

/// Adds one grain at `site` and relaxes in parallel rounds (every cell unstable
/// at the start of a round topples once). Toppling counts per round are
/// appended to `round_activity` when given. Throws ArgumentError for an
/// out-of-range site.
Avalanche drop_and_relax(SandGrid& grid, Site site, std::vector<double>* round_activity = nullptr);

enum class SitePolicy { uniform, center };

struct DriveOptions {
  std::size_t n_drops = 100000;
  std::size_t warmup = 0;  // drops discarded before recording
  SitePolicy policy = SitePolicy::uniform;
};

struct DriveResult {
  std::vector<Avalanche> avalanches;   // one per recorded drop
  std::vector<double> topplings_per_drop;
  /// One zero slot per drop (the drive tick) followed by the toppling count of
  /// each relaxation round it caused.
  std::vector<double> activity;
  std::vector<double> mean_height;     // after each recorded drop
};

/// Throws ArgumentError when n_drops == 0.
DriveResult drive(SandGrid& grid, RngStream& rng, const DriveOptions& options);

/// Applies `drops` to copies of `grid` in the given order and in permutations - 1
/// random reorderings; true when every final configuration is identical.
/// Throws ArgumentError when permutations < 2.
bool abelian_check(const SandGrid& grid, std::span<const Site> drops, RngStream& rng,
                   std::size_t permutations);

/// Log-log fit of the complementary CDF P(S >= s) of the nonzero avalanche sizes at
/// `points` log-spaced s in [s_min, s_max]. Throws FitError when fewer than 3
/// points have nonzero probability.
PowerLawFit avalanche_ccdf_fit(std::span<const Avalanche> avalanches, double s_min = 10.0,
                               double s_max = 1000.0, std::size_t points = 16);

}  // namespace stochlab::sandpile
