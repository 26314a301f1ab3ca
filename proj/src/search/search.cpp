#include <algorithm>
#include <cmath>
#include <limits>

#include "stochlab/errors.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/search.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::search {
namespace {

std::int64_t wrap(std::int64_t v, std::int64_t side) { return ((v % side) + side) % side; }

std::size_t flat(Cell c, std::size_t side) {
  return static_cast<std::size_t>(c.y) * side + static_cast<std::size_t>(c.x);
}

void check_start(const SearchArena& arena, Cell start) {
  const auto s = static_cast<std::int64_t>(arena.side);
  if (start.x < 0 || start.y < 0 || start.x >= s || start.y >= s)
    throw ArgumentError("search: start out of bounds");
}

// Runs `next` until capture or budget; `next` advances the position in place.
template <typename Step>
SearchOutcome run(const SearchArena& arena, Cell start, Step next) {
  arena.validate();
  check_start(arena, start);
  const auto mask = arena.capture_mask();
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::size_t distinct = 0;
  SearchOutcome out;
  Cell pos = start;
  for (std::size_t step = 0;; ++step) {
    const std::size_t i = flat(pos, arena.side);
    if (!seen[i]) {
      seen[i] = 1;
      ++distinct;
    }
    if (mask[i]) {
      out.found = true;
      out.steps_to_find = step;
      out.steps_taken = step;
      break;
    }
    if (step == arena.step_budget) {
      out.steps_taken = step;
      break;
    }
    next(pos);
  }
  out.coverage = static_cast<double>(distinct) / static_cast<double>(mask.size());
  return out;
}

}  // namespace

void SearchArena::validate() const {
  if (side == 0) throw ArgumentError("SearchArena: side must be > 0");
  if (targets.empty()) throw ArgumentError("SearchArena: need at least one target");
  if (!(capture_radius >= 0.0)) throw ArgumentError("SearchArena: capture_radius must be >= 0");
  const auto s = static_cast<std::int64_t>(side);
  for (const Cell& t : targets)
    if (t.x < 0 || t.y < 0 || t.x >= s || t.y >= s)
      throw ArgumentError("SearchArena: target out of bounds");
}

double torus_distance(Cell a, Cell b, std::size_t side) {
  const auto s = static_cast<std::int64_t>(side);
  std::int64_t dx = wrap(a.x - b.x, s), dy = wrap(a.y - b.y, s);
  dx = std::min(dx, s - dx);
  dy = std::min(dy, s - dy);
  return std::hypot(static_cast<double>(dx), static_cast<double>(dy));
}

std::vector<std::uint8_t> SearchArena::capture_mask() const {
  std::vector<std::uint8_t> mask(side * side, 0);
  const auto s = static_cast<std::int64_t>(side);
  const auto reach = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(capture_radius)), s);
  for (const Cell& t : targets)
    for (std::int64_t dy = -reach; dy <= reach; ++dy)
      for (std::int64_t dx = -reach; dx <= reach; ++dx) {
        const Cell c{wrap(t.x + dx, s), wrap(t.y + dy, s)};
        if (torus_distance(c, t, side) <= capture_radius) mask[flat(c, side)] = 1;
      }
  return mask;
}

SearchOutcome random_walk_search(const SearchArena& arena, Cell start, RngStream& rng) {
  const auto s = static_cast<std::int64_t>(arena.side);
  std::uint64_t bits = 0;
  int left = 0;
  return run(arena, start, [&](Cell& p) {
    if (left == 0) {
      bits = rng.next();
      left = 32;
    }
    const auto dir = static_cast<unsigned>(bits & 3u);
    bits >>= 2;
    --left;
    if (dir < 2) p.x = wrap(p.x + (dir == 0 ? 1 : -1), s);
    else p.y = wrap(p.y + (dir == 2 ? 1 : -1), s);
  });
}

SearchOutcome sweep_search(const SearchArena& arena, Cell start) {
  const auto s = static_cast<std::int64_t>(arena.side);
  std::int64_t dir = 1, along = 0;
  return run(arena, start, [&](Cell& p) {
    if (along == s - 1) {
      p.y = wrap(p.y + 1, s);
      dir = -dir;
      along = 0;
    } else {
      p.x = wrap(p.x + dir, s);
      ++along;
    }
  });
}

std::vector<TournamentRow> strategy_tournament(std::span<const TournamentCell> cells,
                                               std::size_t replicas, RngStream& rng) {
  if (replicas < 100) throw ArgumentError("strategy_tournament: need at least 100 replicas");
  for (const auto& c : cells)
    if (c.side == 0 || c.n_targets == 0 || c.n_targets > c.side * c.side)
      throw ArgumentError("strategy_tournament: need 1 <= n_targets <= side^2");

  const std::size_t jobs = cells.size() * replicas;
  std::vector<SearchOutcome> walk(jobs), sweep(jobs);
  const RngStream parent = rng;
  parallel_for(jobs, [&](std::size_t job) {
    const TournamentCell& c = cells[job / replicas];
    RngStream stream = parent.substream(job);
    SearchArena arena;
    arena.side = c.side;
    arena.capture_radius = c.capture_radius;
    arena.step_budget = c.step_budget;
    std::vector<std::size_t> cell_ids(c.side * c.side);
    for (std::size_t i = 0; i < cell_ids.size(); ++i) cell_ids[i] = i;
    // Partial Fisher-Yates: the first n_targets entries are a uniform sample.
    for (std::size_t i = 0; i < c.n_targets; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(stream.below(cell_ids.size() - i));
      std::swap(cell_ids[i], cell_ids[j]);
      arena.targets.push_back({static_cast<std::int64_t>(cell_ids[i] % c.side),
                               static_cast<std::int64_t>(cell_ids[i] / c.side)});
    }
    const Cell start{static_cast<std::int64_t>(stream.below(c.side)),
                     static_cast<std::int64_t>(stream.below(c.side))};
    walk[job] = random_walk_search(arena, start, stream);
    sweep[job] = sweep_search(arena, start);
  });
  rng = parent.substream(jobs);

  auto summarize_strategy = [&](const std::string& name, const std::vector<SearchOutcome>& runs,
                                std::size_t cell) {
    StrategyRecord rec;
    rec.strategy = name;
    std::vector<double> steps;
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto& o = runs[cell * replicas + r];
      if (o.found) steps.push_back(static_cast<double>(*o.steps_to_find));
    }
    rec.success_probability = static_cast<double>(steps.size()) / static_cast<double>(replicas);
    if (steps.empty()) {
      rec.mean_steps = rec.median_steps = std::numeric_limits<double>::quiet_NaN();
    } else {
      rec.mean_steps = summarize(steps).mean;
      rec.median_steps = median(steps);
    }
    return rec;
  };

  std::vector<TournamentRow> table;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    TournamentRow row;
    row.cell = cells[i];
    row.strategies = {summarize_strategy("sweep", sweep, i),
                      summarize_strategy("random_walk", walk, i)};
    std::stable_sort(row.strategies.begin(), row.strategies.end(),
                     [](const StrategyRecord& a, const StrategyRecord& b) {
                       const bool an = std::isnan(a.median_steps), bn = std::isnan(b.median_steps);
                       if (an != bn) return bn;
                       if (!an && a.median_steps != b.median_steps) return a.median_steps < b.median_steps;
                       return a.success_probability > b.success_probability;
                     });
    for (std::size_t r = 0; r < row.strategies.size(); ++r) row.strategies[r].rank = r + 1;
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace stochlab::search
