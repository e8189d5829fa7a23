#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumorlab/error.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/maxflow.hpp"
#include "rumorlab/protocol.hpp"
#include "rumorlab/rational.hpp"

namespace rumorlab {

/// Subset of a ground set U as a bitmask; bit i stands for U[i].
using Subset = std::uint32_t;

inline constexpr std::size_t kMaxGroundSize = 16;
inline constexpr std::size_t kMaxFamilyGround = 5;
inline constexpr std::size_t kMaxExactNodes = 8;
inline constexpr std::size_t kMaxExactRounds = 4;
inline constexpr std::size_t kMaxHolleyGround = 8;

/// Exact distribution over 2^U.
class OutcomeDistribution {
 public:
  OutcomeDistribution() : OutcomeDistribution(std::vector<NodeId>{}, std::vector<Rational>{Rational(1)}) {}

  OutcomeDistribution(std::vector<NodeId> ground, std::vector<Rational> probs)
      : ground_(std::move(ground)), probs_(std::move(probs)) {
    if (ground_.size() > kMaxGroundSize)
      throw Error("too-large-exact", "ground set of " + std::to_string(ground_.size()) + " nodes");
    if (probs_.size() != (std::size_t{1} << ground_.size()))
      throw Error("bad-distribution", "expected 2^|U| = " + std::to_string(std::size_t{1} << ground_.size()) +
                                          " probabilities, got " + std::to_string(probs_.size()));
    Rational total = 0;
    for (const auto& p : probs_) {
      if (p < 0) throw Error("bad-distribution", "negative probability " + to_string(p));
      total += p;
    }
    if (total != 1) throw Error("bad-distribution", "probabilities sum to " + to_string(total));
  }

  static OutcomeDistribution point_mass(std::vector<NodeId> ground, Subset at) {
    std::vector<Rational> probs(std::size_t{1} << ground.size(), Rational(0));
    probs.at(at) = 1;
    return {std::move(ground), std::move(probs)};
  }

  static OutcomeDistribution uniform(std::vector<NodeId> ground) {
    const std::size_t size = std::size_t{1} << ground.size();
    return {std::move(ground), std::vector<Rational>(size, Rational(1, static_cast<long long>(size)))};
  }

  /// Independent Bernoulli(p[i]) for each U[i].
  static OutcomeDistribution product(std::vector<NodeId> ground, const std::vector<Rational>& p) {
    if (p.size() != ground.size()) throw Error("bad-distribution", "one probability per ground node expected");
    std::vector<Rational> probs(std::size_t{1} << ground.size(), Rational(1));
    for (std::size_t s = 0; s < probs.size(); ++s)
      for (std::size_t i = 0; i < ground.size(); ++i) probs[s] *= (s >> i & 1) ? p[i] : 1 - p[i];
    return {std::move(ground), std::move(probs)};
  }

  const std::vector<NodeId>& ground() const noexcept { return ground_; }
  std::size_t ground_size() const noexcept { return ground_.size(); }
  std::size_t subset_count() const noexcept { return probs_.size(); }
  const Rational& prob(Subset s) const { return probs_.at(s); }
  const std::vector<Rational>& probs() const noexcept { return probs_; }

  std::vector<Subset> support() const {
    std::vector<Subset> out;
    for (Subset s = 0; s < probs_.size(); ++s)
      if (probs_[s] > 0) out.push_back(s);
    return out;
  }

  bool strictly_positive() const {
    return std::all_of(probs_.begin(), probs_.end(), [](const Rational& p) { return p > 0; });
  }

  /// Pr(M ⊆ A).
  Rational prob_contains(Subset m) const {
    Rational acc = 0;
    for (Subset s = 0; s < probs_.size(); ++s)
      if ((s & m) == m) acc += probs_[s];
    return acc;
  }

  /// Pr(A in F) for a family given as a bitmask over subsets.
  Rational prob_family(std::uint64_t family) const {
    Rational acc = 0;
    for (Subset s = 0; s < probs_.size(); ++s)
      if (family >> s & 1) acc += probs_[s];
    return acc;
  }

  Rational expectation(std::span<const Rational> f) const {
    if (f.size() != probs_.size()) throw Error("bad-distribution", "function table size differs from 2^|U|");
    Rational acc = 0;
    for (std::size_t s = 0; s < probs_.size(); ++s) acc += probs_[s] * f[s];
    return acc;
  }

  /// Index of node v in the ground set, or -1.
  int index_of(NodeId v) const {
    auto it = std::find(ground_.begin(), ground_.end(), v);
    return it == ground_.end() ? -1 : static_cast<int>(it - ground_.begin());
  }

  /// Law of A ∩ sub, re-indexed over `sub` (which must lie in U).
  OutcomeDistribution marginal_on(const std::vector<NodeId>& sub) const {
    std::vector<int> idx;
    for (NodeId v : sub) {
      int i = index_of(v);
      if (i < 0) throw Error("bad-distribution", "node " + std::to_string(v) + " not in ground set");
      idx.push_back(i);
    }
    std::vector<Rational> probs(std::size_t{1} << sub.size(), Rational(0));
    for (Subset s = 0; s < probs_.size(); ++s) {
      if (probs_[s] == 0) continue;
      Subset t = 0;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (s >> idx[j] & 1) t |= Subset{1} << j;
      probs[t] += probs_[s];
    }
    return {sub, std::move(probs)};
  }

  Subset mask_of(const InformedSet& s) const {
    Subset m = 0;
    for (std::size_t i = 0; i < ground_.size(); ++i)
      if (s.contains(ground_[i])) m |= Subset{1} << i;
    return m;
  }

  friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;

 private:
  std::vector<NodeId> ground_;
  std::vector<Rational> probs_;
};

inline void to_json(nlohmann::json& j, const OutcomeDistribution& d) {
  nlohmann::json probs = nlohmann::json::object();
  for (Subset s : d.support()) probs[std::to_string(s)] = to_string(d.prob(s));
  j = nlohmann::json{{"U", d.ground()}, {"probs", probs}};
}

inline void from_json(const nlohmann::json& j, OutcomeDistribution& d) {
  try {
    auto ground = j.at("U").get<std::vector<NodeId>>();
    if (ground.size() > kMaxGroundSize) throw Error("too-large-exact", "ground set too large");
    std::vector<Rational> probs(std::size_t{1} << ground.size(), Rational(0));
    for (const auto& [key, value] : j.at("probs").items()) {
      std::size_t pos = 0;
      unsigned long mask = std::stoul(key, &pos);
      if (pos != key.size() || mask >= probs.size()) throw Error("bad-distribution", "bad subset key '" + key + "'");
      probs[mask] = parse_rational(value.get<std::string>());
    }
    d = OutcomeDistribution(std::move(ground), std::move(probs));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error("bad-distribution", e.what());
  }
}

// ---------------------------------------------------------------------------
// Monotone families.

namespace detail {

inline void enumerate_families(std::size_t k, const std::vector<Subset>& order, std::size_t pos,
                               std::uint64_t family, std::vector<std::uint64_t>& out) {
  if (pos == order.size()) {
    out.push_back(family);
    return;
  }
  enumerate_families(k, order, pos + 1, family, out);
  const Subset s = order[pos];
  for (std::size_t x = 0; x < k; ++x) {
    Subset up = s | (Subset{1} << x);
    if (up != s && !(family >> up & 1)) return;
  }
  enumerate_families(k, order, pos + 1, family | (std::uint64_t{1} << s), out);
}

inline std::vector<std::uint64_t> build_families(std::size_t k) {
  std::vector<Subset> order(std::size_t{1} << k);
  for (Subset s = 0; s < order.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(),
                   [](Subset a, Subset b) { return std::popcount(a) > std::popcount(b); });
  std::vector<std::uint64_t> out;
  enumerate_families(k, order, 0, 0, out);
  return out;
}

}  // namespace detail

/// All upward-closed families of subsets of a k-element set, as bitmasks over
/// the 2^k subsets. Includes the empty and the full family.
inline const std::vector<std::uint64_t>& monotone_families(std::size_t k) {
  if (k > kMaxFamilyGround)
    throw Error("too-large-exact", "monotone families need |U| <= 5, got " + std::to_string(k));
  static const std::array<std::vector<std::uint64_t>, kMaxFamilyGround + 1> cache = [] {
    std::array<std::vector<std::uint64_t>, kMaxFamilyGround + 1> all;
    for (std::size_t i = 0; i <= kMaxFamilyGround; ++i) all[i] = detail::build_families(i);
    return all;
  }();
  return cache[k];
}

inline std::vector<Subset> family_members(std::uint64_t family, std::size_t k) {
  std::vector<Subset> out;
  for (Subset s = 0; s < (Subset{1} << k); ++s)
    if (family >> s & 1) out.push_back(s);
  return out;
}

/// {A : |A| >= threshold}.
inline std::uint64_t cardinality_family(std::size_t k, int threshold) {
  std::uint64_t f = 0;
  for (Subset s = 0; s < (Subset{1} << k); ++s)
    if (std::popcount(s) >= threshold) f |= std::uint64_t{1} << s;
  return f;
}

// ---------------------------------------------------------------------------
// Dominance checks. d1 is the candidate dominating distribution throughout.

namespace detail {

inline void require_same_ground(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  if (a.ground() != b.ground()) throw Error("bad-distribution", "distributions live on different ground sets");
}

/// Both distributions scaled to integers by their common denominator.
inline std::pair<std::vector<BigInt>, std::vector<BigInt>> scaled(const OutcomeDistribution& a,
                                                                  const OutcomeDistribution& b, BigInt* scale) {
  BigInt l = 1;
  for (const auto& p : a.probs()) l = lcm(l, denominator_of(p));
  for (const auto& p : b.probs()) l = lcm(l, denominator_of(p));
  std::vector<BigInt> x, y;
  for (const auto& p : a.probs()) x.push_back(numerator_of(p) * (l / denominator_of(p)));
  for (const auto& p : b.probs()) y.push_back(numerator_of(p) * (l / denominator_of(p)));
  if (scale) *scale = l;
  return {std::move(x), std::move(y)};
}

inline std::vector<BigInt> scaled_one(const OutcomeDistribution& a) {
  BigInt l = 1;
  for (const auto& p : a.probs()) l = lcm(l, denominator_of(p));
  std::vector<BigInt> x;
  for (const auto& p : a.probs()) x.push_back(numerator_of(p) * (l / denominator_of(p)));
  return x;
}

inline void require_strictly_positive(const OutcomeDistribution& a, const char* name) {
  if (!a.strictly_positive())
    throw Error("not-strictly-positive", std::string(name) + " puts zero mass on some subset");
}

}  // namespace detail

inline bool is_increasing(std::span<const Rational> f, std::size_t k) {
  for (Subset s = 0; s < f.size(); ++s)
    for (std::size_t x = 0; x < k; ++x)
      if (!(s >> x & 1) && f[s | (Subset{1} << x)] < f[s]) return false;
  return true;
}

/// E_{d1}[f] >= E_{d2}[f] for an increasing f given as a table over 2^U.
inline bool check_increasing_expectation(const OutcomeDistribution& d1, const OutcomeDistribution& d2,
                                         std::span<const Rational> f) {
  detail::require_same_ground(d1, d2);
  if (f.size() != d1.subset_count()) throw Error("bad-distribution", "function table size differs from 2^|U|");
  if (!is_increasing(f, d1.ground_size())) throw Error("not-increasing", "f decreases along some inclusion");
  return d1.expectation(f) >= d2.expectation(f);
}

struct StrassenReport {
  bool holds = true;
  std::size_t families = 0;
  std::uint64_t witness = 0;  // family with the largest Pr2(F) - Pr1(F) when !holds
  Rational deficit = 0;       // that difference
};

/// Pr_{d1}(F) >= Pr_{d2}(F) for every monotone family F.
inline StrassenReport check_strassen_monotone_sets(const OutcomeDistribution& d1, const OutcomeDistribution& d2) {
  detail::require_same_ground(d1, d2);
  const std::size_t k = d1.ground_size();
  const auto& families = monotone_families(k);
  BigInt scale;
  auto [x, y] = detail::scaled(d1, d2, &scale);
  std::vector<BigInt> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y[i] - x[i];
  StrassenReport rep;
  rep.families = families.size();
  BigInt worst = 0;
  for (std::uint64_t f : families) {
    BigInt acc = 0;
    for (Subset s = 0; s < diff.size(); ++s)
      if (f >> s & 1) acc += diff[s];
    if (acc > worst) {
      worst = acc;
      rep.witness = f;
    }
  }
  rep.holds = worst == 0;
  rep.deficit = Rational(worst, scale);
  return rep;
}

struct CouplingEntry {
  Subset lower;  // drawn from the dominated distribution
  Subset upper;  // drawn from the dominating distribution, lower ⊆ upper
  Rational mass;
};

struct CouplingPlan {
  std::vector<NodeId> ground;
  std::vector<CouplingEntry> entries;

  bool monotone() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const CouplingEntry& e) { return (e.lower & e.upper) == e.lower; });
  }
  Rational upper_marginal(Subset a) const {
    Rational acc = 0;
    for (const auto& e : entries)
      if (e.upper == a) acc += e.mass;
    return acc;
  }
  Rational lower_marginal(Subset b) const {
    Rational acc = 0;
    for (const auto& e : entries)
      if (e.lower == b) acc += e.mass;
    return acc;
  }
};

inline void to_json(nlohmann::json& j, const CouplingPlan& plan) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : plan.entries)
    entries.push_back({{"lower", e.lower}, {"upper", e.upper}, {"mass", to_string(e.mass)}});
  j = nlohmann::json{{"U", plan.ground}, {"entries", entries}};
}

/// Transport feasibility: mass of d2 at B may move to d1's mass at A only if
/// B ⊆ A. Solved exactly by max-flow on integer-scaled capacities.
inline std::optional<CouplingPlan> find_monotone_coupling(const OutcomeDistribution& d1_dominating,
                                                          const OutcomeDistribution& d2_dominated) {
  detail::require_same_ground(d1_dominating, d2_dominated);
  if (d1_dominating.ground_size() > 12)
    throw Error("too-large-exact", "coupling search needs |U| <= 12");
  BigInt scale;
  auto [upper, lower] = detail::scaled(d1_dominating, d2_dominated, &scale);
  // Mass common to both laws stays on the diagonal; the upset differences,
  // and with them feasibility, are unchanged by removing it.
  std::vector<BigInt> common(upper.size());
  for (Subset s = 0; s < upper.size(); ++s) {
    common[s] = upper[s] < lower[s] ? upper[s] : lower[s];
    upper[s] -= common[s];
    lower[s] -= common[s];
  }
  BigInt residual = 0;
  for (const auto& x : lower) residual += x;
  std::vector<Subset> lower_support, upper_support;
  for (Subset s = 0; s < lower.size(); ++s) {
    if (lower[s] > 0) lower_support.push_back(s);
    if (upper[s] > 0) upper_support.push_back(s);
  }
  const std::size_t source = 0, sink = 1, lower_base = 2, upper_base = 2 + lower_support.size();
  MaxFlow<BigInt> flow(upper_base + upper_support.size());
  for (std::size_t i = 0; i < lower_support.size(); ++i) flow.add_edge(source, lower_base + i, lower[lower_support[i]]);
  for (std::size_t j = 0; j < upper_support.size(); ++j) flow.add_edge(upper_base + j, sink, upper[upper_support[j]]);
  struct Link {
    std::size_t edge;
    Subset lower, upper;
  };
  std::vector<Link> links;
  for (std::size_t i = 0; i < lower_support.size(); ++i)
    for (std::size_t j = 0; j < upper_support.size(); ++j) {
      Subset b = lower_support[i], a = upper_support[j];
      if ((b & a) == b) links.push_back({flow.add_edge(lower_base + i, upper_base + j, scale), b, a});
    }
  if (flow.run(source, sink) != residual) return std::nullopt;
  std::map<std::pair<Subset, Subset>, BigInt> mass;
  for (Subset s = 0; s < common.size(); ++s)
    if (common[s] > 0) mass[{s, s}] += common[s];
  for (const auto& l : links)
    if (flow.flow(l.edge) > 0) mass[{l.lower, l.upper}] += flow.flow(l.edge);
  CouplingPlan plan;
  plan.ground = d1_dominating.ground();
  for (const auto& [pair, m] : mass) plan.entries.push_back({pair.first, pair.second, Rational(m, scale)});
  return plan;
}

struct HolleyReport {
  bool holds = true;
  Subset a = 0;  // first violating pair
  Subset b = 0;
};

/// μ1(A∪B) μ2(A∩B) >= μ1(A) μ2(B) for all A, B, which makes μ1 dominate μ2.
inline HolleyReport check_holley(const OutcomeDistribution& mu1, const OutcomeDistribution& mu2) {
  detail::require_same_ground(mu1, mu2);
  if (mu1.ground_size() > kMaxHolleyGround) throw Error("too-large-exact", "Holley check needs |U| <= 8");
  detail::require_strictly_positive(mu1, "mu1");
  detail::require_strictly_positive(mu2, "mu2");
  auto x = detail::scaled_one(mu1);
  auto y = detail::scaled_one(mu2);
  const Subset size = static_cast<Subset>(x.size());
  for (Subset a = 0; a < size; ++a)
    for (Subset b = 0; b < size; ++b)
      if (x[a | b] * y[a & b] < x[a] * y[b]) return {false, a, b};
  return {};
}

struct QuotientReport {
  bool holds = true;
  Subset a = 0;  // A without x
  Subset b = 0;  // B without x
  std::size_t x = 0;
};

/// μ1(A∪x)/μ1(A\x) >= μ2(B∪x)/μ2(B\x) for all A, B and x in U.
inline QuotientReport quotient_rule_check(const OutcomeDistribution& mu1, const OutcomeDistribution& mu2) {
  detail::require_same_ground(mu1, mu2);
  if (mu1.ground_size() > kMaxHolleyGround) throw Error("too-large-exact", "quotient rule check needs |U| <= 8");
  detail::require_strictly_positive(mu1, "mu1");
  detail::require_strictly_positive(mu2, "mu2");
  auto p = detail::scaled_one(mu1);
  auto q = detail::scaled_one(mu2);
  const std::size_t k = mu1.ground_size();
  for (std::size_t x = 0; x < k; ++x) {
    const Subset bit = Subset{1} << x;
    Subset min_a = kNoNode, max_b = kNoNode;
    for (Subset s = 0; s < p.size(); ++s) {
      if (s & bit) continue;
      // p[s|bit]/p[s] < p[min|bit]/p[min]
      if (min_a == kNoNode || p[s | bit] * p[min_a] < p[min_a | bit] * p[s]) min_a = s;
      if (max_b == kNoNode || q[s | bit] * q[max_b] > q[max_b | bit] * q[s]) max_b = s;
    }
    if (p[min_a | bit] * q[max_b] < q[max_b | bit] * p[min_a]) return {false, min_a, max_b, x};
  }
  return {};
}

/// The ε-perturbed measure on U = {a,b,c} (ids 0,1,2) and the uniform one.
/// {abc}, {a}, {b}, {c} get 1/8+ε, the other four subsets 1/8-ε.
inline std::pair<OutcomeDistribution, OutcomeDistribution> counterexample_distributions(const Rational& epsilon) {
  if (epsilon < 0 || epsilon >= Rational(1, 8))
    throw Error("bad-epsilon", "epsilon must lie in [0, 1/8), got " + to_string(epsilon));
  std::vector<NodeId> ground{0, 1, 2};
  std::vector<Rational> probs(8);
  for (Subset s = 0; s < 8; ++s) {
    const int size = std::popcount(s);
    probs[s] = Rational(1, 8) + ((size == 1 || size == 3) ? epsilon : -epsilon);
  }
  return {OutcomeDistribution(ground, std::move(probs)), OutcomeDistribution::uniform(ground)};
}

// ---------------------------------------------------------------------------
// Exact one-round and multi-round laws of PULL and random RPULL.

enum class ExactProtocol { pull, rpull_random };

namespace detail {

using Transition = std::map<Subset, Rational>;

/// Law of the set of ground nodes informed after one round, starting from the
/// ground nodes in `state` plus everything outside the ground set.
inline Transition one_round(const Graph& g, const std::vector<NodeId>& ground, const std::vector<int>& index_of,
                            Subset state, ExactProtocol protocol) {
  auto informed = [&](NodeId v) { return index_of[v] < 0 || (state >> index_of[v] & 1); };
  std::vector<NodeId> frontier;
  for (std::size_t i = 0; i < ground.size(); ++i) {
    if (state >> i & 1) continue;
    NodeId u = ground[i];
    for (NodeId w : g.neighbors(u))
      if (informed(w)) {
        frontier.push_back(u);
        break;
      }
  }
  Transition out;
  if (protocol == ExactProtocol::pull) {
    out[state] = 1;
    for (NodeId u : frontier) {
      std::size_t ds = 0;
      for (NodeId w : g.neighbors(u)) ds += informed(w) ? 1 : 0;
      Rational p(static_cast<long long>(ds), static_cast<long long>(g.degree(u)));
      Transition next;
      for (const auto& [s, m] : out) {
        next[s | (Subset{1} << index_of[u])] += m * p;
        if (p != 1) next[s] += m * (1 - p);
      }
      out = std::move(next);
    }
    return out;
  }
  // Random RPULL: every frontier node picks an informed neighbor or misses,
  // then each server picks one requester uniformly.
  std::uint64_t combos = 1;
  for (NodeId u : frontier) {
    combos *= g.degree(u) + 1;
    if (combos > 2'000'000) throw Error("too-large-exact", "request enumeration too large");
  }
  std::vector<NodeId> choice(frontier.size(), kNoNode);
  std::map<NodeId, std::vector<NodeId>> groups;
  auto resolve = [&](const Rational& mass) {
    groups.clear();
    for (std::size_t i = 0; i < frontier.size(); ++i)
      if (choice[i] != kNoNode) groups[choice[i]].push_back(frontier[i]);
    Transition local{{state, mass}};
    for (const auto& [server, reqs] : groups) {
      Transition next;
      Rational share(1, static_cast<long long>(reqs.size()));
      for (const auto& [s, m] : local)
        for (NodeId r : reqs) next[s | (Subset{1} << index_of[r])] += m * share;
      local = std::move(next);
    }
    for (const auto& [s, m] : local) out[s] += m;
  };
  auto recurse = [&](auto&& self, std::size_t i, const Rational& mass) -> void {
    if (i == frontier.size()) {
      resolve(mass);
      return;
    }
    NodeId u = frontier[i];
    Rational each(1, static_cast<long long>(g.degree(u)));
    std::size_t misses = 0;
    for (NodeId w : g.neighbors(u)) {
      if (!informed(w)) {
        ++misses;
        continue;
      }
      choice[i] = w;
      self(self, i + 1, mass * each);
    }
    if (misses > 0) {
      choice[i] = kNoNode;
      self(self, i + 1, mass * each * static_cast<long long>(misses));
    }
  };
  recurse(recurse, 0, Rational(1));
  return out;
}

inline std::vector<int> ground_index(const Graph& g, const std::vector<NodeId>& ground) {
  std::vector<int> idx(g.node_count(), -1);
  for (std::size_t i = 0; i < ground.size(); ++i) idx[ground[i]] = static_cast<int>(i);
  return idx;
}

inline std::vector<NodeId> uninformed(const Graph& g, std::span<const NodeId> seeds) {
  InformedSet s(g.node_count(), seeds);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (!s.contains(v)) out.push_back(v);
  return out;
}

}  // namespace detail

/// Law of S_rounds ∩ U with U = V \ S0.
inline OutcomeDistribution exact_distribution(const Graph& g, std::span<const NodeId> seeds, ExactProtocol protocol,
                                              std::size_t rounds) {
  if (seeds.empty()) throw Error("empty-seed", "initial informed set must be nonempty");
  auto ground = detail::uninformed(g, seeds);
  if (ground.size() > kMaxExactNodes || rounds > kMaxExactRounds)
    throw Error("too-large-exact", "exact laws need |U| <= 8 and rounds <= 4 (|U| = " +
                                       std::to_string(ground.size()) + ", rounds = " + std::to_string(rounds) + ")");
  auto idx = detail::ground_index(g, ground);
  detail::Transition law{{0, Rational(1)}};
  for (std::size_t t = 0; t < rounds; ++t) {
    detail::Transition next;
    for (const auto& [s, m] : law)
      for (const auto& [s2, m2] : detail::one_round(g, ground, idx, s, protocol)) next[s2] += m * m2;
    law = std::move(next);
  }
  std::vector<Rational> probs(std::size_t{1} << ground.size(), Rational(0));
  for (const auto& [s, m] : law) probs[s] = m;
  return {std::move(ground), std::move(probs)};
}

/// Expected broadcast time from S0 by first-step analysis on the absorbing
/// chain over subsets of U. Infinite expectations (unreachable nodes) throw.
inline Rational exact_expected_broadcast_time(const Graph& g, std::span<const NodeId> seeds, ExactProtocol protocol) {
  if (seeds.empty()) throw Error("empty-seed", "initial informed set must be nonempty");
  auto ground = detail::uninformed(g, seeds);
  if (ground.size() > kMaxExactNodes) throw Error("too-large-exact", "expected time needs |U| <= 8");
  auto dist = bfs_distances(g, seeds);
  if (std::count(dist.begin(), dist.end(), kNoNode) > 0)
    throw Error("unreachable", "some node cannot be reached from the initial set");
  auto idx = detail::ground_index(g, ground);
  const Subset full = static_cast<Subset>((std::size_t{1} << ground.size()) - 1);
  std::vector<Rational> expected(std::size_t{full} + 1, Rational(0));
  // Supersets first: decreasing numeric order visits every proper superset
  // of s before s.
  for (Subset s = full; s-- > 0;) {
    auto step = detail::one_round(g, ground, idx, s, protocol);
    Rational stay = 0, acc = 1;
    for (const auto& [s2, m] : step) {
      if (s2 == s)
        stay += m;
      else
        acc += m * expected[s2];
    }
    if (stay == 1) throw Error("unreachable", "state cannot progress");
    expected[s] = acc / (1 - stay);
  }
  return expected[0];
}

/// Nodes with 0 < d_S(u) < d(u): the ground set on which one-round laws are
/// strictly positive.
inline std::vector<NodeId> strictly_random_nodes(const Graph& g, std::span<const NodeId> seeds) {
  InformedSet s(g.node_count(), seeds);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (s.contains(u)) continue;
    std::size_t ds = g.degree_into(u, s);
    if (ds > 0 && ds < g.degree(u)) out.push_back(u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistical surrogate over monotone families.

struct EmpiricalDominanceReport {
  std::size_t families = 0;
  double worst_deficit = 0.0;  // in standard errors; +inf when a sure event is missed
  std::uint64_t worst_family = 0;
  double p_dominating = 0.0;
  double p_dominated = 0.0;
  double threshold = 3.0;
  bool passes = true;
};

namespace detail {

inline std::vector<std::uint64_t> subset_counts(std::span<const Subset> samples, std::size_t k) {
  std::vector<std::uint64_t> counts(std::size_t{1} << k, 0);
  for (Subset s : samples) {
    if (s >= counts.size()) throw Error("bad-sample", "sample outside 2^U");
    ++counts[s];
  }
  return counts;
}

inline double family_frequency(const std::vector<std::uint64_t>& counts, std::uint64_t f, std::size_t total) {
  std::uint64_t hits = 0;
  for (Subset s = 0; s < counts.size(); ++s)
    if (f >> s & 1) hits += counts[s];
  return static_cast<double>(hits) / static_cast<double>(total);
}

inline void record(EmpiricalDominanceReport& rep, std::uint64_t f, double p1, double p2, double se) {
  double deficit;
  if (se > 0)
    deficit = (p2 - p1) / se;
  else
    deficit = p2 > p1 ? std::numeric_limits<double>::infinity() : 0.0;
  if (deficit > rep.worst_deficit || rep.families == 0) {
    rep.worst_deficit = deficit;
    rep.worst_family = f;
    rep.p_dominating = p1;
    rep.p_dominated = p2;
  }
  ++rep.families;
}

}  // namespace detail

/// Two-sample test: for every monotone F, how many standard errors Pr1(F)
/// falls short of Pr2(F). Samples are subsets of a k-element ground set.
inline EmpiricalDominanceReport empirical_dominance_test(std::span<const Subset> dominating,
                                                         std::span<const Subset> dominated, std::size_t k,
                                                         double threshold = 3.0) {
  if (dominating.empty() || dominated.empty()) throw Error("empty-sample", "both samples must be nonempty");
  auto c1 = detail::subset_counts(dominating, k);
  auto c2 = detail::subset_counts(dominated, k);
  EmpiricalDominanceReport rep;
  rep.threshold = threshold;
  const double n1 = static_cast<double>(dominating.size()), n2 = static_cast<double>(dominated.size());
  for (std::uint64_t f : monotone_families(k)) {
    double p1 = detail::family_frequency(c1, f, dominating.size());
    double p2 = detail::family_frequency(c2, f, dominated.size());
    double se = std::sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2);
    detail::record(rep, f, p1, p2, se);
  }
  rep.passes = rep.worst_deficit <= threshold;
  return rep;
}

/// One-sample variant against an exact dominated law; the standard error is
/// that of the exact probability at the sample size.
inline EmpiricalDominanceReport empirical_vs_exact(std::span<const Subset> dominating,
                                                   const OutcomeDistribution& dominated, double threshold = 3.0) {
  if (dominating.empty()) throw Error("empty-sample", "sample must be nonempty");
  const std::size_t k = dominated.ground_size();
  auto c1 = detail::subset_counts(dominating, k);
  EmpiricalDominanceReport rep;
  rep.threshold = threshold;
  const double n = static_cast<double>(dominating.size());
  for (std::uint64_t f : monotone_families(k)) {
    double p1 = detail::family_frequency(c1, f, dominating.size());
    double p2 = to_double(dominated.prob_family(f));
    double se = std::sqrt(p2 * (1 - p2) / n);
    detail::record(rep, f, p1, p2, se);
  }
  rep.passes = rep.worst_deficit <= threshold;
  return rep;
}

}  // namespace rumorlab
