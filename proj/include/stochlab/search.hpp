#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::search {

struct Cell {
  std::int64_t x = 0;
  std::int64_t y = 0;
  bool operator==(const Cell&) const = default;
};

/// Square torus of side x side cells. A searcher at c captures when the torus
/// Euclidean distance from c to some target is <= capture_radius.
struct SearchArena {
  std::size_t side = 32;
  std::vector<Cell> targets;
  double capture_radius = 0.0;
  std::size_t step_budget = 10240;

  /// Throws ArgumentError for side 0, no targets, a target out of bounds or a
  /// negative radius.
  void validate() const;
  /// Row-major flags of capturing cells.
  std::vector<std::uint8_t> capture_mask() const;
};

double torus_distance(Cell a, Cell b, std::size_t side);

struct SearchOutcome {
  bool found = false;
  std::optional<std::size_t> steps_to_find;  // empty when the budget ran out
  std::size_t steps_taken = 0;
  double coverage = 0.0;  // distinct cells visited / side^2, start included
};

/// Uniform nearest-neighbour steps; the search stops at the first capture.
SearchOutcome random_walk_search(const SearchArena& arena, Cell start, RngStream& rng);

/// Serpentine: side - 1 steps along +x, one step along +y, side - 1 steps along -x,
/// and so on, wrapping on the torus. Covers every cell in side^2 - 1 steps.
SearchOutcome sweep_search(const SearchArena& arena, Cell start);

struct TournamentCell {
  std::size_t side = 32;
  std::size_t n_targets = 1;
  double capture_radius = 0.0;
  std::size_t step_budget = 10240;
};

struct StrategyRecord {
  std::string strategy;
  std::size_t rank = 0;          // 1 is best within the cell
  double success_probability = 0.0;
  double mean_steps = 0.0;       // among successes; NaN when none
  double median_steps = 0.0;     // among successes; NaN when none
};

struct TournamentRow {
  TournamentCell cell;
  std::vector<StrategyRecord> strategies;  // ordered by rank
};

/// For each cell, `replicas` arenas with distinct uniform targets and a uniform
/// start; every strategy runs on the same arenas. Ranked by median steps, then
/// by success probability; a strategy with no successes ranks last. Replica r of
/// cell i runs on substream i * replicas + r. Throws ArgumentError for fewer than
/// 100 replicas or more targets than cells.
std::vector<TournamentRow> strategy_tournament(std::span<const TournamentCell> cells,
                                               std::size_t replicas, RngStream& rng);

}  // namespace stochlab::search
