#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rumorlab/error.hpp"

namespace rumorlab {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Undirected simple graph in compressed adjacency form.
///
/// Node ids are 0..n-1, every neighbor array is sorted, adjacency is
/// symmetric and free of self-loops and duplicates. Immutable once built;
/// the fault-injection helpers return modified copies.
class Graph {
 public:
  Graph() = default;

  /// Builds from an undirected edge list. Each edge may be given in either
  /// orientation but only once.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    if (node_count == 0) throw Error("bad-graph", "graph needs at least one node");
    if (node_count > std::numeric_limits<NodeId>::max() - 1)
      throw Error("too-large", "node count exceeds id range");
    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count)
        throw Error("bad-node", "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                    "} references a node outside 0.." +
                                    std::to_string(node_count - 1));
      if (u == v) throw Error("self-loop", "self-loop at node " + std::to_string(u));
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 1; i <= node_count; ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.adjacency_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.adjacency_[fill[u]++] = v;
      g.adjacency_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
      auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (auto dup = std::adjacent_find(first, last); dup != last)
        throw Error("duplicate-edge", "edge {" + std::to_string(v) + "," +
                                          std::to_string(*dup) + "} listed twice");
    }
    g.roles_.assign(node_count, {});
    return g;
  }

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// δ
  std::size_t min_degree() const {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (NodeId v = 0; v < node_count(); ++v) best = std::min(best, degree(v));
    return best;
  }

  /// Δ
  std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeId v = 0; v < node_count(); ++v) best = std::max(best, degree(v));
    return best;
  }

  /// Number of neighbors of `u` whose flag in `member` is set (d_S(u)).
  template <typename Membership>
  std::size_t degree_into(NodeId u, const Membership& member) const {
    std::size_t count = 0;
    for (NodeId w : neighbors(u))
      if (member[w]) ++count;
    return count;
  }

  /// All edges as (u,v) with u<v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  const std::string& role(NodeId v) const { return roles_[v]; }
  void set_role(NodeId v, std::string tag) { roles_[v] = std::move(tag); }

  Graph with_edge(NodeId u, NodeId v) const {
    auto list = edges();
    list.emplace_back(std::min(u, v), std::max(u, v));
    return rebuild(std::move(list));
  }

  Graph without_edge(NodeId u, NodeId v) const {
    auto list = edges();
    std::erase(list, Edge{std::min(u, v), std::max(u, v)});
    return rebuild(std::move(list));
  }

  /// Scans the stored adjacency and returns a description of the first
  /// structural defect, or an empty string.
  std::string structural_defect() const {
    for (NodeId u = 0; u < node_count(); ++u) {
      auto nb = neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] >= node_count()) return "neighbor id out of range at " + std::to_string(u);
        if (nb[i] == u) return "self-loop at " + std::to_string(u);
        if (i > 0 && nb[i - 1] >= nb[i]) return "unsorted or duplicate adjacency at " + std::to_string(u);
        if (!has_edge(nb[i], u)) return "asymmetric edge " + std::to_string(u) + "->" + std::to_string(nb[i]);
      }
    }
    return {};
  }

 private:
  Graph rebuild(std::vector<Edge> list) const {
    Graph g = from_edges(node_count(), list);
    g.roles_ = roles_;
    return g;
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<std::string> roles_;
};

/// Ordered simple path p_{v,u}.
struct PathDescriptor {
  std::vector<NodeId> nodes;
};

struct PathDegrees {
  std::size_t sum = 0;  // D_p
  std::size_t max = 0;  // Δ_p
};

/// Sum and maximum of degrees along a path; throws "not-a-path" when
/// consecutive nodes are not adjacent or a node repeats.
inline PathDegrees path_degree_sum(const Graph& g, const PathDescriptor& p) {
  if (p.nodes.empty()) throw Error("not-a-path", "empty path");
  PathDegrees out;
  std::vector<NodeId> seen;
  seen.reserve(p.nodes.size());
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    NodeId v = p.nodes[i];
    if (v >= g.node_count()) throw Error("not-a-path", "node " + std::to_string(v) + " not in graph");
    if (i > 0 && !g.has_edge(p.nodes[i - 1], v))
      throw Error("not-a-path", "nodes " + std::to_string(p.nodes[i - 1]) + " and " +
                                    std::to_string(v) + " are not adjacent");
    seen.push_back(v);
    out.sum += g.degree(v);
    out.max = std::max(out.max, g.degree(v));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw Error("not-a-path", "path repeats a node");
  return out;
}

/// Breadth-first distances from a seed set; unreachable nodes get kNoNode.
inline std::vector<NodeId> bfs_distances(const Graph& g, std::span<const NodeId> seeds) {
  std::vector<NodeId> dist(g.node_count(), kNoNode);
  std::vector<NodeId> queue;
  for (NodeId s : seeds)
    if (dist[s] == kNoNode) {
      dist[s] = 0;
      queue.push_back(s);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (NodeId w : g.neighbors(u))
      if (dist[w] == kNoNode) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

inline bool is_connected(const Graph& g) {
  NodeId zero = 0;
  auto dist = bfs_distances(g, std::span<const NodeId>(&zero, 1));
  return std::none_of(dist.begin(), dist.end(), [](NodeId d) { return d == kNoNode; });
}

inline bool is_tree(const Graph& g) {
  return g.edge_count() + 1 == g.node_count() && is_connected(g);
}

/// Maximum of D_p over all simple paths of a tree (node-weighted diameter
/// with weights d(v)).
inline std::size_t max_path_degree_sum(const Graph& g) {
  if (!is_tree(g)) throw Error("not-a-tree", "graph is not a tree");
  const std::size_t n = g.node_count();
  std::vector<NodeId> parent(n, kNoNode), order;
  order.reserve(n);
  order.push_back(0);
  parent[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeId w : g.neighbors(order[head]))
      if (parent[w] == kNoNode) {
        parent[w] = order[head];
        order.push_back(w);
      }
  // best_down[v]: heaviest path starting at v going into its subtree.
  std::vector<std::size_t> best_down(n, 0);
  std::size_t best = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    std::size_t top1 = 0, top2 = 0;
    for (NodeId w : g.neighbors(v)) {
      if (w == parent[v] && v != 0) continue;
      std::size_t b = best_down[w];
      if (b > top1) {
        top2 = top1;
        top1 = b;
      } else if (b > top2) {
        top2 = b;
      }
    }
    best_down[v] = g.degree(v) + top1;
    best = std::max(best, g.degree(v) + top1 + top2);
  }
  return best;
}

}  // namespace rumorlab
