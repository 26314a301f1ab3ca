#include <algorithm>
#include <cmath>
#include <numeric>

#include "stochlab/errors.hpp"
#include "stochlab/networks.hpp"
#include "stochlab/parallel.hpp"

namespace stochlab::networks {

Graph ring_lattice(std::size_t n, std::size_t k) {
  if (k % 2 != 0 || k < 2 || n <= k) throw ArgumentError("ring_lattice: need n > k >= 2, k even");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k / 2; ++j)
      g.add_edge(static_cast<Node>(i), static_cast<Node>((i + j) % n));
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(static_cast<Node>(i), static_cast<Node>(j));
  return g;
}

Graph watts_strogatz(std::size_t n, std::size_t k, double p, RngStream& rng, RewireStats* stats) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("watts_strogatz: p must be in [0, 1]");
  Graph g = ring_lattice(n, k);
  RewireStats local;
  // Lattice edges are visited layer by layer (all distance-1 edges first), as in
  // the original construction.
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (p == 0.0 || !(rng.uniform() < p)) continue;
      const auto u = static_cast<Node>(i);
      const auto old = static_cast<Node>((i + j) % n);
      if (g.degree(u) >= n - 1) {
        ++local.skipped;
        continue;
      }
      Node target = u;
      for (int attempt = 0; attempt < 64; ++attempt) {
        const auto t = static_cast<Node>(rng.below(n));
        if (t != u && !g.has_edge(u, t)) {
          target = t;
          break;
        }
      }
      if (target == u) {
        std::vector<Node> free;
        for (Node t = 0; t < n; ++t)
          if (t != u && !g.has_edge(u, t)) free.push_back(t);
        target = free[rng.below(free.size())];
      }
      g.remove_edge(u, old);
      g.add_edge(u, target);
      ++local.rewired;
    }
  }
  if (stats) *stats = local;
  return g;
}

Graph barabasi_albert(std::size_t n, std::size_t m, RngStream& rng) {
  if (m < 1 || n <= m) throw ArgumentError("barabasi_albert: need n > m >= 1");
  Graph g(n);
  std::vector<Node> ends;  // every edge contributes both endpoints
  ends.reserve(2 * (m * (m + 1) / 2 + m * (n - m - 1)));
  for (Node u = 0; u <= m; ++u)
    for (Node v = u + 1; v <= m; ++v) {
      g.add_edge(u, v);
      ends.push_back(u);
      ends.push_back(v);
    }
  std::vector<Node> chosen;
  for (std::size_t node = m + 1; node < n; ++node) {
    chosen.clear();
    while (chosen.size() < m) {
      // With m = 1 the seed clique is one edge, so ends is never empty.
      const Node t = ends[rng.below(ends.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    const auto v = static_cast<Node>(node);
    for (Node t : chosen) {
      g.add_edge(v, t);
      ends.push_back(v);
      ends.push_back(t);
    }
  }
  return g;
}

namespace {

std::size_t common_neighbors(std::span<const Node> a, std::span<const Node> b) {
  std::size_t count = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

NetworkMetrics metrics(const Graph& g) {
  const std::size_t n = g.node_count();
  NetworkMetrics out;
  std::size_t max_degree = 0;
  for (Node v = 0; v < n; ++v) max_degree = std::max(max_degree, g.degree(v));
  out.degree_histogram.assign(max_degree + 1, 0);
  for (Node v = 0; v < n; ++v) ++out.degree_histogram[g.degree(v)];

  out.clustering_defined = n >= 3;
  if (out.clustering_defined) {
    double local_sum = 0.0, triangles = 0.0, triples = 0.0;
    for (Node v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      const double d = static_cast<double>(nb.size());
      if (nb.size() < 2) continue;
      std::size_t links = 0;
      for (Node u : nb) links += common_neighbors(nb, g.neighbors(u));
      const double tri = static_cast<double>(links) / 2.0;
      const double possible = d * (d - 1.0) / 2.0;
      local_sum += tri / possible;
      triangles += tri;
      triples += possible;
    }
    out.clustering = local_sum / static_cast<double>(n);
    out.transitivity = triples > 0.0 ? triangles / triples : 0.0;
  }

  // Components, then all-pairs BFS inside the largest one.
  std::vector<std::size_t> component(n, n);
  std::size_t best = n, best_size = 0, labels = 0;
  std::vector<Node> queue;
  for (Node s = 0; s < n; ++s) {
    if (component[s] != n) continue;
    queue.assign(1, s);
    component[s] = labels;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (Node u : g.neighbors(queue[h]))
        if (component[u] == n) {
          component[u] = labels;
          queue.push_back(u);
        }
    if (queue.size() > best_size) {
      best_size = queue.size();
      best = labels;
    }
    ++labels;
  }
  out.largest_component = best_size;
  out.connected = labels <= 1;
  if (best_size < 2) return out;

  std::vector<Node> members;
  for (Node v = 0; v < n; ++v)
    if (component[v] == best) members.push_back(v);
  std::vector<std::uint64_t> sums(members.size(), 0);
  parallel_for(members.size(), [&](std::size_t idx) {
    std::vector<std::uint32_t> dist(n, UINT32_MAX);
    std::vector<Node> q{members[idx]};
    dist[members[idx]] = 0;
    std::uint64_t total = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const Node x = q[h];
      total += dist[x];
      for (Node u : g.neighbors(x))
        if (dist[u] == UINT32_MAX) {
          dist[u] = dist[x] + 1;
          q.push_back(u);
        }
    }
    sums[idx] = total;
  });
  const auto total = std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
  const auto c = static_cast<double>(best_size);
  out.path_length = static_cast<double>(total) / (c * (c - 1.0));
  return out;
}

PowerLawFit degree_ccdf_fit(const Graph& g, double k_min, double k_max, std::size_t points) {
  std::vector<double> degrees(g.node_count());
  for (Node v = 0; v < g.node_count(); ++v) degrees[v] = static_cast<double>(g.degree(v));
  return ccdf_fit(degrees, k_min, k_max, points);
}

SmallWorldScan small_world_scan(std::size_t n, std::size_t k, std::span<const double> p_values,
                                std::size_t seeds, RngStream& rng) {
  if (seeds < 10) throw ArgumentError("small_world_scan: need at least 10 seeds");
  const auto zero = std::find(p_values.begin(), p_values.end(), 0.0);
  if (zero == p_values.end()) throw ArgumentError("small_world_scan: p_values must include 0");

  const std::size_t jobs = p_values.size() * seeds;
  std::vector<double> c(jobs), l(jobs);
  const RngStream parent = rng;
  parallel_for(jobs, [&](std::size_t job) {
    RngStream stream = parent.substream(job);
    const NetworkMetrics m = metrics(watts_strogatz(n, k, p_values[job / seeds], stream));
    c[job] = m.clustering;
    l[job] = m.path_length;
  }, 1);  // metrics() already spreads its BFS over workers
  rng = parent.substream(jobs);

  SmallWorldScan scan;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const SampleStats cs = summarize(std::span<const double>(c.data() + i * seeds, seeds));
    const SampleStats ls = summarize(std::span<const double>(l.data() + i * seeds, seeds));
    SmallWorldRow row;
    row.p = p_values[i];
    row.clustering = cs.mean;
    row.path_length = ls.mean;
    row.clustering_stderr = cs.std_error;
    row.path_stderr = ls.std_error;
    scan.rows.push_back(row);
  }
  const SmallWorldRow base = scan.rows[static_cast<std::size_t>(zero - p_values.begin())];
  std::vector<double> ps, ls;
  for (auto& row : scan.rows) {
    row.clustering_ratio = base.clustering > 0.0 ? row.clustering / base.clustering : 0.0;
    row.path_ratio = base.path_length > 0.0 ? row.path_length / base.path_length : 0.0;
    if (row.path_ratio < 0.5 && row.clustering_ratio > 0.7 &&
        (!scan.window_found || row.p < scan.window_p)) {
      scan.window_found = true;
      scan.window_p = row.p;
    }
    ps.push_back(row.p);
    ls.push_back(row.path_length);
  }
  scan.path_spearman = ps.size() >= 2 ? spearman(ps, ls) : 0.0;
  return scan;
}

}  // namespace stochlab::networks
