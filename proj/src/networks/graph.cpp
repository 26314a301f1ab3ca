#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stochlab/errors.hpp"
#include "stochlab/networks.hpp"

namespace stochlab::networks {

Graph::Graph(std::size_t n) : adj_(n) {
  if (n > std::size_t{0xffffffff}) throw CapabilityError("Graph: too many nodes");
}

bool Graph::has_edge(Node u, Node v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::add_edge(Node u, Node v) {
  if (u >= adj_.size() || v >= adj_.size()) throw ArgumentError("Graph: node out of range");
  if (u == v || has_edge(u, v)) return false;
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
  ++edges_;
  return true;
}

bool Graph::remove_edge(Node u, Node v) {
  if (!has_edge(u, v)) return false;
  adj_[u].erase(std::lower_bound(adj_[u].begin(), adj_[u].end(), v));
  adj_[v].erase(std::lower_bound(adj_[v].begin(), adj_[v].end(), u));
  --edges_;
  return true;
}

std::vector<std::pair<Node, Node>> Graph::edges() const {
  std::vector<std::pair<Node, Node>> out;
  out.reserve(edges_);
  for (Node u = 0; u < adj_.size(); ++u)
    for (Node v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool Graph::valid() const {
  std::size_t ends = 0;
  for (Node u = 0; u < adj_.size(); ++u) {
    const auto& a = adj_[u];
    if (!std::is_sorted(a.begin(), a.end())) return false;
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
    for (Node v : a) {
      if (v == u || v >= adj_.size()) return false;
      if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u)) return false;
    }
    ends += a.size();
  }
  return ends == 2 * edges_;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.node_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t declared = 0;
  bool has_count = false;
  std::vector<std::pair<Node, Node>> pairs;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# n=", 0) == 0) {
        declared = std::stoul(line.substr(4));
        has_count = true;
      }
      continue;
    }
    std::istringstream fields(line);
    long long u = -1, v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0)
      throw ArgumentError("read_edge_list: malformed line '" + line + "'");
    pairs.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
    max_index = std::max<std::size_t>(max_index, static_cast<std::size_t>(std::max(u, v)));
  }
  const std::size_t n = has_count ? declared : (pairs.empty() ? 0 : max_index + 1);
  if (!pairs.empty() && max_index >= n) throw ArgumentError("read_edge_list: node index exceeds n");
  Graph g(n);
  for (const auto& [u, v] : pairs)
    if (!g.add_edge(u, v)) throw ArgumentError("read_edge_list: self-loop or duplicate edge");
  return g;
}

}  // namespace stochlab::networks
