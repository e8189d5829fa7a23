#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rumorlab/error.hpp"
#include "rumorlab/graph.hpp"

namespace rumorlab {

enum class BasicKind { path, star, complete, complete_binary_tree, clique };

inline constexpr std::size_t kMaxGeneratedNodes = std::size_t{1} << 24;
inline constexpr std::size_t kMaxGeneratedEdges = std::size_t{1} << 27;

namespace detail {

inline void check_budget(std::size_t nodes, std::size_t edges) {
  if (nodes > kMaxGeneratedNodes || edges > kMaxGeneratedEdges)
    throw Error("too-large", std::to_string(nodes) + " nodes / " + std::to_string(edges) +
                                 " edges exceed the generator budget");
}

inline std::size_t ceil_log2(std::size_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace detail

/// Path, star (center 0), complete graph / clique, or complete binary tree of
/// the given depth in heap order (children of i are 2i+1 and 2i+2).
inline Graph gen_basic(BasicKind kind, std::size_t size_param) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  switch (kind) {
    case BasicKind::path:
      if (size_param < 1) throw Error("bad-size", "path needs at least one node");
      n = size_param;
      detail::check_budget(n, n);
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
      break;
    case BasicKind::star:
      if (size_param < 1) throw Error("bad-size", "star needs at least one node");
      n = size_param;
      detail::check_budget(n, n);
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
      break;
    case BasicKind::complete:
    case BasicKind::clique:
      if (size_param < 1) throw Error("bad-size", "complete graph needs at least one node");
      n = size_param;
      detail::check_budget(n, n > kMaxGeneratedNodes ? n : n * (n - 1) / 2);
      for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
      break;
    case BasicKind::complete_binary_tree:
      if (size_param >= 24) throw Error("too-large", "binary tree depth " + std::to_string(size_param));
      n = (std::size_t{1} << (size_param + 1)) - 1;
      for (NodeId v = 1; v < n; ++v) edges.emplace_back((v - 1) / 2, v);
      break;
  }
  return Graph::from_edges(n, edges);
}

/// Ids of one k-leaf-connected tree: a complete binary tree with k leaves
/// whose leaves additionally form a clique. Listed in heap order, so
/// branch_nodes[0] is the root and the children of heap index i sit at 2i+1
/// and 2i+2 of branch_nodes ++ leaf_nodes.
struct LctLayout {
  std::size_t k = 0;
  NodeId root = 0;
  std::vector<NodeId> branch_nodes;
  std::vector<NodeId> leaf_nodes;

  NodeId heap(std::size_t index) const {
    return index < branch_nodes.size() ? branch_nodes[index] : leaf_nodes[index - branch_nodes.size()];
  }
  NodeId first_id() const { return root; }
  std::size_t size() const { return branch_nodes.size() + leaf_nodes.size(); }
  bool contains(NodeId v) const { return v >= root && v < root + size(); }
};

namespace detail {

inline LctLayout append_lct(std::size_t k, NodeId base, std::vector<Edge>& edges) {
  LctLayout layout;
  layout.k = k;
  layout.root = base;
  for (std::size_t i = 0; i + 1 < k; ++i) layout.branch_nodes.push_back(base + static_cast<NodeId>(i));
  for (std::size_t i = 0; i < k; ++i) layout.leaf_nodes.push_back(base + static_cast<NodeId>(k - 1 + i));
  for (std::size_t i = 1; i < 2 * k - 1; ++i)
    edges.emplace_back(base + static_cast<NodeId>((i - 1) / 2), base + static_cast<NodeId>(i));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) edges.emplace_back(layout.leaf_nodes[a], layout.leaf_nodes[b]);
  return layout;
}

inline void tag_lct(Graph& g, const LctLayout& lct, const std::string& name) {
  for (NodeId v : lct.branch_nodes) g.set_role(v, name + ".branch");
  for (NodeId v : lct.leaf_nodes) g.set_role(v, name + ".leaf");
  g.set_role(lct.root, name + ".root");
}

}  // namespace detail

inline bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline std::pair<Graph, LctLayout> gen_lct(std::size_t k) {
  if (k < 2 || !is_power_of_two(k))
    throw Error("lct-shape", "leaf count " + std::to_string(k) + " is not a power of two >= 2");
  detail::check_budget(2 * k - 1, k * (k - 1) / 2 + 2 * (k - 1));
  std::vector<Edge> edges;
  auto layout = detail::append_lct(k, 0, edges);
  Graph g = Graph::from_edges(2 * k - 1, edges);
  detail::tag_lct(g, layout, "lct");
  return {std::move(g), std::move(layout)};
}

/// One copy of the separation construction: hub r, the large LCTs D_alpha
/// and D_zeta with n_big leaves each, the m small LCTs D_1..D_m with l leaves,
/// and the bridge targets C_alpha inside D_alpha's branch set.
struct SeparationCopy {
  NodeId r = 0;
  LctLayout alpha;
  LctLayout zeta;
  std::vector<LctLayout> parts;
  std::vector<NodeId> c_alpha;

  NodeId r_alpha() const { return alpha.root; }
  NodeId r_zeta() const { return zeta.root; }
  NodeId first_id() const { return r; }
  std::size_t size() const {
    std::size_t s = 1 + alpha.size() + zeta.size();
    for (const auto& p : parts) s += p.size();
    return s;
  }
  /// Index i of the part D_i containing v, or -1.
  int part_of(NodeId v) const {
    if (parts.empty() || v < parts.front().root) return -1;
    std::size_t idx = (v - parts.front().root) / parts.front().size();
    return idx < parts.size() ? static_cast<int>(idx) : -1;
  }
};

struct SeparationLayout {
  std::size_t l = 0;
  std::size_t c = 0;
  std::size_t m = 0;
  std::size_t n_big = 0;
  std::size_t log_n = 0;  // ceil(log2 n_big)
  bool doubled = false;
  std::vector<SeparationCopy> copies;

  std::size_t expected_hub_degree() const { return 2 * m * log_n + 1; }
};

namespace detail {

inline std::string separation_shape_problem(std::size_t l, std::size_t c) {
  if (l < 2 || !is_power_of_two(l)) return "l must be a power of two >= 2";
  if (c < 1) return "c must be >= 1";
  const std::size_t n_big = l * l;
  const std::size_t log_n = ceil_log2(n_big);
  const std::size_t m = c * l;
  if (m * log_n > n_big)
    return "m*log n = " + std::to_string(m * log_n) + " exceeds the " + std::to_string(n_big) +
           " leaves of L_alpha";
  if (log_n + 1 > l)
    return "log n = " + std::to_string(log_n) + " hub leaves plus one bridge leaf exceed the " +
           std::to_string(l) + " leaves of each D_i";
  if (m > n_big) return "m exceeds the leaves of L_zeta";
  if (ceil_log2(m) >= ceil_log2(n_big))
    return "depth ceil(log2 m) layer of D_alpha is not a branch layer";
  return {};
}

inline SeparationCopy append_separation_copy(std::size_t l, std::size_t m, std::size_t n_big,
                                             std::size_t log_n, NodeId base,
                                             std::vector<Edge>& edges) {
  SeparationCopy copy;
  copy.r = base;
  NodeId next = base + 1;
  copy.alpha = append_lct(n_big, next, edges);
  next += static_cast<NodeId>(copy.alpha.size());
  copy.zeta = append_lct(n_big, next, edges);
  next += static_cast<NodeId>(copy.zeta.size());
  for (std::size_t i = 0; i < m; ++i) {
    copy.parts.push_back(append_lct(l, next, edges));
    next += static_cast<NodeId>(copy.parts.back().size());
  }
  // C_alpha: first m heap positions of depth ceil(log2 m) in D_alpha.
  const std::size_t depth = ceil_log2(m);
  const std::size_t layer_start = (std::size_t{1} << depth) - 1;
  for (std::size_t i = 0; i < m; ++i) copy.c_alpha.push_back(copy.alpha.heap(layer_start + i));

  edges.emplace_back(copy.r, copy.zeta.root);
  for (std::size_t j = 0; j < m * log_n; ++j) edges.emplace_back(copy.r, copy.alpha.leaf_nodes[j]);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& part = copy.parts[i];
    for (std::size_t j = 0; j < log_n; ++j) edges.emplace_back(copy.r, part.leaf_nodes[j]);
    edges.emplace_back(part.root, copy.zeta.leaf_nodes[i]);
    edges.emplace_back(part.leaf_nodes.back(), copy.c_alpha[i]);
  }
  return copy;
}

}  // namespace detail

/// Graph on which adversarial and random restricted pull separate.
/// n_big = l^2, m = c*l, all logarithms are ceil(log2 n_big). With `doubled`
/// two copies are joined by the edge {r'_alpha, r''_alpha}.
inline std::pair<Graph, SeparationLayout> gen_separation(std::size_t l, std::size_t c, bool doubled) {
  if (auto problem = detail::separation_shape_problem(l, c); !problem.empty())
    throw Error("separation-shape", problem);
  SeparationLayout layout;
  layout.l = l;
  layout.c = c;
  layout.m = c * l;
  layout.n_big = l * l;
  layout.log_n = detail::ceil_log2(layout.n_big);
  layout.doubled = doubled;

  const std::size_t copy_nodes = 1 + 2 * (2 * layout.n_big - 1) + layout.m * (2 * l - 1);
  const std::size_t copy_edges = 2 * (layout.n_big * (layout.n_big - 1) / 2 + 2 * (layout.n_big - 1)) +
                                 layout.m * (l * (l - 1) / 2 + 2 * (l - 1)) + layout.expected_hub_degree() +
                                 2 * layout.m;
  const std::size_t copies = doubled ? 2 : 1;
  detail::check_budget(copies * copy_nodes, copies * copy_edges + 1);

  std::vector<Edge> edges;
  edges.reserve(copies * copy_edges + 1);
  for (std::size_t i = 0; i < copies; ++i)
    layout.copies.push_back(detail::append_separation_copy(
        l, layout.m, layout.n_big, layout.log_n, static_cast<NodeId>(i * copy_nodes), edges));
  if (doubled) edges.emplace_back(layout.copies[0].r_alpha(), layout.copies[1].r_alpha());

  Graph g = Graph::from_edges(copies * copy_nodes, edges);
  for (std::size_t i = 0; i < copies; ++i) {
    const auto& copy = layout.copies[i];
    const std::string prefix = doubled ? (i == 0 ? "G1." : "G2.") : "";
    detail::tag_lct(g, copy.alpha, prefix + "D_alpha");
    detail::tag_lct(g, copy.zeta, prefix + "D_zeta");
    for (std::size_t p = 0; p < copy.parts.size(); ++p)
      detail::tag_lct(g, copy.parts[p], prefix + "D_" + std::to_string(p + 1));
    for (NodeId v : copy.c_alpha) g.set_role(v, prefix + "C_alpha");
    g.set_role(copy.r, prefix + "r");
  }
  return {std::move(g), std::move(layout)};
}

/// Complete bipartite A-B core where every b_i is bridged to one node t_{i,j}
/// of each of its cliques T_{i,j}.
struct TightnessLayout {
  std::size_t k = 0;  // clique size
  std::vector<NodeId> a;
  std::vector<NodeId> b;
  std::size_t cliques_per_b = 0;
  std::vector<std::vector<NodeId>> cliques;  // index i*cliques_per_b + j
  std::vector<NodeId> bridges;               // t_{i,j}, same indexing

  const std::vector<NodeId>& clique(std::size_t i, std::size_t j) const { return cliques[i * cliques_per_b + j]; }
};

/// General form; the full construction is
/// gen_tightness_fragment(k^2, k^2, k^2, k).
inline std::pair<Graph, TightnessLayout> gen_tightness_fragment(std::size_t a_count, std::size_t b_count,
                                                                 std::size_t cliques_per_b,
                                                                 std::size_t clique_size) {
  if (a_count < 1 || b_count < 1 || clique_size < 2)
    throw Error("tightness-shape", "need |A|,|B| >= 1 and clique size >= 2");
  const std::size_t n = a_count + b_count + b_count * cliques_per_b * clique_size;
  detail::check_budget(n, a_count * b_count + b_count * cliques_per_b * (1 + clique_size * clique_size / 2));
  TightnessLayout layout;
  layout.k = clique_size;
  layout.cliques_per_b = cliques_per_b;
  std::vector<Edge> edges;
  NodeId next = 0;
  for (std::size_t i = 0; i < a_count; ++i) layout.a.push_back(next++);
  for (std::size_t i = 0; i < b_count; ++i) layout.b.push_back(next++);
  for (NodeId a : layout.a)
    for (NodeId b : layout.b) edges.emplace_back(a, b);
  for (std::size_t i = 0; i < b_count; ++i) {
    for (std::size_t j = 0; j < cliques_per_b; ++j) {
      std::vector<NodeId> members;
      for (std::size_t x = 0; x < clique_size; ++x) members.push_back(next++);
      for (std::size_t x = 0; x < clique_size; ++x)
        for (std::size_t y = x + 1; y < clique_size; ++y) edges.emplace_back(members[x], members[y]);
      edges.emplace_back(layout.b[i], members.front());
      layout.bridges.push_back(members.front());
      layout.cliques.push_back(std::move(members));
    }
  }
  Graph g = Graph::from_edges(n, edges);
  for (NodeId v : layout.a) g.set_role(v, "A");
  for (NodeId v : layout.b) g.set_role(v, "B");
  for (const auto& cl : layout.cliques)
    for (NodeId v : cl) g.set_role(v, "T");
  for (NodeId v : layout.bridges) g.set_role(v, "bridge");
  return {std::move(g), std::move(layout)};
}

inline std::pair<Graph, TightnessLayout> gen_tightness(std::size_t k) {
  if (k < 2) throw Error("tightness-shape", "k must be >= 2");
  return gen_tightness_fragment(k * k, k * k, k * k, k);
}

// ---------------------------------------------------------------------------
// Layout validation. Each returns the list of violated invariants.

namespace detail {

inline void check_structure(const Graph& g, std::vector<std::string>& out) {
  if (auto defect = g.structural_defect(); !defect.empty()) out.push_back("graph structure: " + defect);
}

inline void check_lct(const Graph& g, const LctLayout& lct, const std::string& name,
                      std::vector<std::string>& out) {
  if (lct.leaf_nodes.size() != lct.k) out.push_back(name + ": leaf count differs from k");
  if (lct.branch_nodes.size() + 1 != lct.k) out.push_back(name + ": branch count differs from k-1");
  const auto& leaves = lct.leaf_nodes;
  bool clique_ok = true;
  for (std::size_t a = 0; a < leaves.size() && clique_ok; ++a)
    for (std::size_t b = a + 1; b < leaves.size(); ++b)
      if (!g.has_edge(leaves[a], leaves[b])) {
        clique_ok = false;
        break;
      }
  if (!clique_ok) out.push_back(name + ": leaf-clique incomplete");
  const std::size_t total = lct.size();
  for (std::size_t i = 1; i < total; ++i)
    if (!g.has_edge(lct.heap((i - 1) / 2), lct.heap(i))) {
      out.push_back(name + ": binary tree edge missing");
      break;
    }
  // Internal edge count must be exactly clique + tree.
  std::size_t internal = 0;
  for (std::size_t i = 0; i < total; ++i)
    for (NodeId w : g.neighbors(lct.heap(i)))
      if (lct.contains(w)) ++internal;
  if (internal / 2 != lct.k * (lct.k - 1) / 2 + 2 * (lct.k - 1))
    out.push_back(name + ": unexpected internal edge count");
}

}  // namespace detail

inline std::vector<std::string> validate(const Graph& g, const LctLayout& lct) {
  std::vector<std::string> out;
  detail::check_structure(g, out);
  detail::check_lct(g, lct, "lct", out);
  return out;
}

inline std::vector<std::string> validate(const Graph& g, const SeparationLayout& layout) {
  std::vector<std::string> out;
  detail::check_structure(g, out);
  for (std::size_t ci = 0; ci < layout.copies.size(); ++ci) {
    const auto& copy = layout.copies[ci];
    const std::string tag = layout.copies.size() > 1 ? "copy" + std::to_string(ci + 1) + " " : "";
    if (g.degree(copy.r) != layout.expected_hub_degree())
      out.push_back(tag + "hub degree " + std::to_string(g.degree(copy.r)) + " != 2m log n + 1 = " +
                    std::to_string(layout.expected_hub_degree()));
    if (!g.has_edge(copy.r, copy.r_zeta())) out.push_back(tag + "edge r-r_zeta missing");
    std::vector<const LctLayout*> all{&copy.alpha, &copy.zeta};
    for (const auto& p : copy.parts) all.push_back(&p);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const std::string name = tag + (i == 0 ? "D_alpha" : i == 1 ? "D_zeta" : "D_" + std::to_string(i - 1));
      detail::check_lct(g, *all[i], name, out);
      const auto& lct = *all[i];
      for (std::size_t h = 0; h < lct.size(); ++h) {
        NodeId v = lct.heap(h);
        std::size_t external = 0;
        for (NodeId w : g.neighbors(v))
          if (!lct.contains(w)) ++external;
        if (external > 1) {
          out.push_back(name + ": node " + std::to_string(v) + " has more than one external edge");
          break;
        }
      }
    }
    for (std::size_t i = 0; i < copy.parts.size(); ++i) {
      const auto& part = copy.parts[i];
      if (!g.has_edge(part.root, copy.zeta.leaf_nodes[i])) out.push_back(tag + "edge r_i-l_zeta,i missing");
      if (!g.has_edge(part.leaf_nodes.back(), copy.c_alpha[i])) out.push_back(tag + "edge l_i,l-c_i missing");
    }
  }
  if (layout.doubled && layout.copies.size() == 2 &&
      !g.has_edge(layout.copies[0].r_alpha(), layout.copies[1].r_alpha()))
    out.push_back("edge r'_alpha-r''_alpha missing");
  return out;
}

inline std::vector<std::string> validate(const Graph& g, const TightnessLayout& layout) {
  std::vector<std::string> out;
  detail::check_structure(g, out);
  for (std::size_t x = 0; x < layout.a.size(); ++x)
    for (std::size_t y = x + 1; y < layout.a.size(); ++y)
      if (g.has_edge(layout.a[x], layout.a[y])) {
        out.push_back("A independent set violated");
        x = layout.a.size();
        break;
      }
  for (NodeId a : layout.a) {
    bool complete = true;
    for (NodeId b : layout.b) complete = complete && g.has_edge(a, b);
    if (!complete || g.degree(a) != layout.b.size()) {
      out.push_back("A-B bipartite incomplete or A has extra edges");
      break;
    }
  }
  for (std::size_t i = 0; i < layout.b.size(); ++i) {
    for (std::size_t j = 0; j < layout.cliques_per_b; ++j) {
      const auto& cl = layout.clique(i, j);
      std::size_t links = 0;
      for (NodeId v : cl) links += g.has_edge(layout.b[i], v) ? 1 : 0;
      if (links != 1) out.push_back("b_" + std::to_string(i) + " not bridged to exactly one node of T_" +
                                    std::to_string(i) + "," + std::to_string(j));
      for (std::size_t x = 0; x < cl.size(); ++x)
        for (std::size_t y = x + 1; y < cl.size(); ++y)
          if (!g.has_edge(cl[x], cl[y])) {
            out.push_back("clique T_" + std::to_string(i) + "," + std::to_string(j) + " incomplete");
            x = cl.size();
            break;
          }
    }
  }
  return out;
}

}  // namespace rumorlab
