#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "stochlab/rng.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::networks {

using Node = std::uint32_t;

/// Undirected simple graph with sorted adjacency lists.
class Graph {
 public:
  explicit Graph(std::size_t n = 0);

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  std::size_t degree(Node v) const { return adj_.at(v).size(); }
  std::span<const Node> neighbors(Node v) const { return adj_.at(v); }
  bool has_edge(Node u, Node v) const;
  /// False (and no change) for self-loops and existing edges.
  bool add_edge(Node u, Node v);
  bool remove_edge(Node u, Node v);
  std::vector<std::pair<Node, Node>> edges() const;  // u < v, sorted
  /// No loops, no duplicates, symmetric, sorted lists, consistent edge count.
  bool valid() const;

 private:
  std::vector<std::vector<Node>> adj_;
  std::size_t edges_ = 0;
};

Graph ring_lattice(std::size_t n, std::size_t k);
Graph complete_graph(std::size_t n);

struct RewireStats {
  std::size_t rewired = 0;
  std::size_t skipped = 0;  // endpoint already linked to every other node
};

/// Ring of n nodes each linked to its k nearest neighbours; the edge (i, i+j) is
/// moved to (i, t) with probability p, t uniform among non-neighbours of i.
/// Throws ArgumentError unless n > k >= 2, k even and p in [0, 1].
Graph watts_strogatz(std::size_t n, std::size_t k, double p, RngStream& rng,
                     RewireStats* stats = nullptr);

/// Growth from an (m+1)-clique; each new node links to m distinct existing nodes
/// chosen with probability proportional to degree. Throws ArgumentError unless n > m >= 1.
Graph barabasi_albert(std::size_t n, std::size_t m, RngStream& rng);

struct NetworkMetrics {
  double clustering = 0.0;    // mean local coefficient; degree < 2 counts as 0
  double transitivity = 0.0;  // 3 * triangles / connected triples
  double path_length = 0.0;   // mean over ordered pairs in the largest component
  std::vector<std::size_t> degree_histogram;
  std::size_t largest_component = 0;
  bool connected = true;            // false: path_length covers the largest component only
  bool clustering_defined = true;   // false when n < 3
};

NetworkMetrics metrics(const Graph& g);

/// Degree CCDF fit over [k_min, k_max].
PowerLawFit degree_ccdf_fit(const Graph& g, double k_min, double k_max, std::size_t points = 16);

struct SmallWorldRow {
  double p = 0.0;
  double clustering = 0.0;
  double path_length = 0.0;
  double clustering_ratio = 0.0;  // C(p) / C(0)
  double path_ratio = 0.0;        // L(p) / L(0)
  double clustering_stderr = 0.0;
  double path_stderr = 0.0;
};

struct SmallWorldScan {
  std::vector<SmallWorldRow> rows;  // in the order of p_values
  bool window_found = false;        // some p with L ratio < 0.5 and C ratio > 0.7
  double window_p = 0.0;            // smallest such p
  double path_spearman = 0.0;       // rank correlation of mean L with p
};

/// Throws ArgumentError unless p_values contains 0 and seeds >= 10. Seed s of
/// p-value i runs on substream i * seeds + s.
SmallWorldScan small_world_scan(std::size_t n, std::size_t k, std::span<const double> p_values,
                                std::size_t seeds, RngStream& rng);

/// Edge list: "# n=<N>" then one "u v" line per edge (0-indexed, u < v).
void write_edge_list(std::ostream& out, const Graph& g);
/// Reads the format above; without the "# n=" line, n is one more than the largest index.
Graph read_edge_list(std::istream& in);

}  // namespace stochlab::networks
