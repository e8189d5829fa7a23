#pragma once

// Independent reference computations. Nothing here calls into the library's
// protocol, dominance or flow code; graphs are read through plain adjacency.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rumorlab/graph.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using rumorlab::Graph;
using rumorlab::NodeId;

using NodeSet = std::vector<bool>;

/// Law of the informed set after one round, by enumerating every joint
/// request vector and, for the restricted rule, every uniform serve choice.
inline std::map<NodeSet, Q> one_round(const Graph& g, const NodeSet& informed, bool restricted) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> requesters;
  for (NodeId u = 0; u < n; ++u)
    if (!informed[u] && g.degree(u) > 0) requesters.push_back(u);
  std::map<NodeSet, Q> law;
  std::vector<NodeId> target(requesters.size());

  std::function<void(std::size_t, Q)> choose = [&](std::size_t i, Q mass) {
    if (i < requesters.size()) {
      auto nb = g.neighbors(requesters[i]);
      for (NodeId v : nb) {
        target[i] = v;
        choose(i + 1, mass / static_cast<long long>(nb.size()));
      }
      return;
    }
    // Group requesters by informed target.
    std::map<NodeId, std::vector<NodeId>> groups;
    for (std::size_t x = 0; x < requesters.size(); ++x)
      if (informed[target[x]]) groups[target[x]].push_back(requesters[x]);
    if (!restricted) {
      NodeSet next = informed;
      for (auto& [v, rs] : groups)
        for (NodeId u : rs) next[u] = true;
      law[next] += mass;
      return;
    }
    std::vector<std::vector<NodeId>> lists;
    for (auto& [v, rs] : groups) lists.push_back(rs);
    std::function<void(std::size_t, NodeSet, Q)> serve = [&](std::size_t j, NodeSet cur, Q m) {
      if (j == lists.size()) {
        law[cur] += m;
        return;
      }
      for (NodeId u : lists[j]) {
        NodeSet next = cur;
        next[u] = true;
        serve(j + 1, next, m / static_cast<long long>(lists[j].size()));
      }
    };
    serve(0, informed, mass);
  };
  choose(0, Q(1));
  return law;
}

inline std::map<NodeSet, Q> rounds(const Graph& g, const NodeSet& start, bool restricted, int count) {
  std::map<NodeSet, Q> law{{start, Q(1)}};
  for (int t = 0; t < count; ++t) {
    std::map<NodeSet, Q> next;
    for (const auto& [s, p] : law)
      for (const auto& [s2, p2] : one_round(g, s, restricted)) next[s2] += p * p2;
    law = std::move(next);
  }
  return law;
}

/// PULL on a path 0..q-1 from node 0: the informed set is always a prefix and
/// the next node joins with probability 1/2 (or 1 at the far end).
inline double path_pull_expected_time(std::size_t q) {
  if (q < 2) return 0.0;
  return 2.0 * static_cast<double>(q - 2) + 1.0;
}

/// Number of monotone Boolean functions of k variables, k = 0..5.
inline std::uint64_t dedekind(std::size_t k) {
  static const std::uint64_t table[] = {2, 3, 6, 20, 168, 7581};
  return table[k];
}

/// Upward-closed families of 2^U for |U| <= 3, by brute force over all
/// 2^(2^k) families.
inline std::vector<std::vector<std::uint32_t>> upsets(std::size_t k) {
  const std::uint32_t subsets = 1u << k;
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    bool closed = true;
    for (std::uint32_t a = 0; a < subsets && closed; ++a)
      for (std::uint32_t b = 0; b < subsets && closed; ++b)
        if ((fam >> a & 1) && (a & b) == a && !(fam >> b & 1)) closed = false;
    if (!closed) continue;
    std::vector<std::uint32_t> members;
    for (std::uint32_t a = 0; a < subsets; ++a)
      if (fam >> a & 1) members.push_back(a);
    out.push_back(members);
  }
  return out;
}

/// p1 dominates p2 on every upset.
inline bool dominates(const std::vector<Q>& p1, const std::vector<Q>& p2, std::size_t k) {
  for (const auto& fam : upsets(k)) {
    Q a = 0, b = 0;
    for (auto s : fam) {
      a += p1[s];
      b += p2[s];
    }
    if (a < b) return false;
  }
  return true;
}

inline bool holley(const std::vector<Q>& mu1, const std::vector<Q>& mu2) {
  for (std::uint32_t a = 0; a < mu1.size(); ++a)
    for (std::uint32_t b = 0; b < mu1.size(); ++b)
      if (mu1[a | b] * mu2[a & b] < mu1[a] * mu2[b]) return false;
  return true;
}

/// Pr(Geom(p) > x) on {1, 2, ...}.
inline double geometric_tail(double p, double x) { return std::pow(1.0 - p, std::floor(x)); }

/// A random distribution over 2^k with small integer weights; `zero_ok`
/// allows zero weights.
inline std::vector<Q> random_law(std::mt19937_64& gen, std::size_t k, bool zero_ok, int max_weight = 6) {
  std::uniform_int_distribution<int> w(zero_ok ? 0 : 1, max_weight);
  std::vector<long long> raw(std::size_t{1} << k);
  long long total = 0;
  do {
    total = 0;
    for (auto& x : raw) total += (x = w(gen));
  } while (total == 0);
  std::vector<Q> out;
  for (auto x : raw) out.emplace_back(x, total);
  return out;
}

/// Moves part of the mass at each subset to a random superset, giving a law
/// that dominates the input.
inline std::vector<Q> push_up(std::mt19937_64& gen, const std::vector<Q>& base, std::size_t k) {
  std::vector<Q> out(base.size(), Q(0));
  std::uniform_int_distribution<std::uint32_t> pick(0, (1u << k) - 1);
  std::uniform_int_distribution<int> frac(0, 4);
  for (std::uint32_t s = 0; s < base.size(); ++s) {
    Q moved = base[s] * Q(frac(gen), 4);
    std::uint32_t up = s | pick(gen);
    out[s] += base[s] - moved;
    out[up] += moved;
  }
  return out;
}

/// Sum of degrees along the unique path between every pair of tree nodes.
inline std::size_t tree_max_path_degree_sum(const Graph& g) {
  std::size_t best = 0;
  const std::size_t n = g.node_count();
  for (NodeId s = 0; s < n; ++s) {
    std::vector<std::size_t> acc(n, 0);
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack{s};
    seen[s] = true;
    acc[s] = g.degree(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      best = std::max(best, acc[v]);
      for (NodeId w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          acc[w] = acc[v] + g.degree(w);
          stack.push_back(w);
        }
    }
  }
  return best;
}

}  // namespace oracle
