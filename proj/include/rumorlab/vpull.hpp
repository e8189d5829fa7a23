#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumorlab/error.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/protocol.hpp"
#include "rumorlab/rng.hpp"

namespace rumorlab {

struct VpullParams {
  std::uint64_t T = 1;        // phase-1 rounds
  std::uint64_t T_prime = 1;  // probability normalizer T'
  std::uint64_t K = 1;        // bad-execution threshold
  double kappa = 2.0;
  double c = 0.0;             // c_{T,T'} = 2 kappa T / T'

  /// T must be well above T'; anything below the default ratio 8 is flagged.
  bool nonstandard() const { return T < 8 * T_prime; }
};

inline void to_json(nlohmann::json& j, const VpullParams& p) {
  j = nlohmann::json{{"T", p.T}, {"T_prime", p.T_prime}, {"K", p.K}, {"kappa", p.kappa}, {"c", p.c},
                     {"nonstandard", p.nonstandard()}};
}

inline void from_json(const nlohmann::json& j, VpullParams& p) {
  p.T = j.at("T").get<std::uint64_t>();
  p.T_prime = j.at("T_prime").get<std::uint64_t>();
  p.K = j.at("K").get<std::uint64_t>();
  p.kappa = j.value("kappa", 2.0);
  p.c = j.value("c", 2.0 * p.kappa * static_cast<double>(p.T) / static_cast<double>(p.T_prime));
  if (p.T_prime < 1 || p.K < 1 || p.T < 1) throw Error("bad-config", "VPULL parameters must be >= 1");
}

/// K = ceil(c (Δ/δ + log2 n)), T' = ceil((Δ/δ) log2 n) * scale, T = 8 T',
/// with κ = 2 and c = 2κT/T'.
inline VpullParams default_params(const Graph& g, std::uint64_t scale = 1) {
  if (scale < 1) throw Error("bad-config", "scale must be >= 1");
  const double ratio = static_cast<double>(g.max_degree()) / static_cast<double>(std::max<std::size_t>(g.min_degree(), 1));
  const double log_n = std::log2(static_cast<double>(g.node_count()));
  VpullParams p;
  p.kappa = 2.0;
  p.T_prime = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(ratio * log_n - 1e-9))) * scale;
  p.T = 8 * p.T_prime;
  p.c = 2.0 * p.kappa * static_cast<double>(p.T) / static_cast<double>(p.T_prime);
  p.K = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(p.c * (ratio + log_n) - 1e-9)));
  return p;
}

enum class Connectivity : std::uint8_t { informed, weak, strong };

/// Strong iff d_S(u)/d(u) > 1/2; exactly 1/2 is weak. Informed nodes are
/// marked as such.
inline std::vector<Connectivity> classify_connectivity(const Graph& g, const InformedSet& s) {
  std::vector<Connectivity> out(g.node_count(), Connectivity::weak);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (s.contains(u)) {
      out[u] = Connectivity::informed;
      continue;
    }
    if (2 * g.degree_into(u, s) > g.degree(u)) out[u] = Connectivity::strong;
  }
  return out;
}

struct VpullRound {
  std::uint64_t t;
  std::uint32_t max_requests;  // max r_v
  std::uint32_t tokens_sent;
};

struct VpullResult {
  InformedSet final_set;               // S_{T+1}
  bool bad = false;                    // BE
  std::vector<std::uint8_t> bad_at;    // BE_v
  std::vector<std::uint8_t> token;     // tokenReceived
  std::vector<std::uint32_t> sent;     // X_v
  std::vector<NodeId> token_holders;   // in order of receipt
  std::vector<NodeId> final_pull_winners;  // informed by the round-(T+1) pull
  std::uint32_t max_requests = 0;
  std::uint32_t max_sent = 0;
  std::uint64_t clamped = 0;           // rounds where r_v/T' > 1 was clamped
  std::vector<VpullRound> history;
};

/// Algorithm 1. Phase 1 runs T rounds against the fixed S0: uninformed nodes
/// without a token request a uniform neighbor; an informed v with r_v and X_v
/// within K sends, with probability r_v/T', one token to the requester with
/// the smallest serve key. Round T+1 is a global pull if any threshold was
/// breached, otherwise strongly connected nodes pull and token holders are
/// informed.
inline VpullResult run_vpull(const Graph& g, std::span<const NodeId> seeds, const VpullParams& params,
                             const RngPolicy& rng, bool keep_history = false) {
  if (seeds.empty()) throw Error("empty-seed", "initial informed set must be nonempty");
  if (params.T_prime < 1 || params.K < 1) throw Error("bad-config", "VPULL parameters must be >= 1");
  const std::size_t n = g.node_count();
  const InformedSet s0(n, seeds);
  VpullResult res;
  res.bad_at.assign(n, 0);
  res.token.assign(n, 0);
  res.sent.assign(n, 0);

  // Only uninformed nodes next to S0 can ever reach an informed target.
  std::vector<NodeId> active;
  for (NodeId u = 0; u < n; ++u)
    if (!s0.contains(u) && g.degree_into(u, s0) > 0) active.push_back(u);

  std::vector<std::uint32_t> requests(n, 0);
  std::vector<NodeId> best(n, kNoNode);
  std::vector<std::uint64_t> best_key(n, 0);
  std::vector<NodeId> servers;
  for (std::uint64_t t = 1; t <= params.T && !active.empty(); ++t) {
    servers.clear();
    for (NodeId u : active) {
      NodeId v = request_target(g, rng, u, t);
      if (!s0.contains(v)) continue;
      std::uint64_t key = rng.bits(u, t, Purpose::serve);
      if (requests[v]++ == 0) {
        servers.push_back(v);
        best[v] = u;
        best_key[v] = key;
      } else if (key < best_key[v] || (key == best_key[v] && u < best[v])) {
        best[v] = u;
        best_key[v] = key;
      }
    }
    VpullRound round{t, 0, 0};
    for (NodeId v : servers) {
      const std::uint32_t r = requests[v];
      round.max_requests = std::max(round.max_requests, r);
      if (r > params.K || res.sent[v] > params.K) {
        res.bad_at[v] = 1;
      } else {
        double p = static_cast<double>(r) / static_cast<double>(params.T_prime);
        if (p > 1.0) {
          p = 1.0;
          ++res.clamped;
        }
        if (rng.uniform(v, t, Purpose::token) < p) {
          res.token[best[v]] = 1;
          res.token_holders.push_back(best[v]);
          ++res.sent[v];
          ++round.tokens_sent;
        }
      }
      requests[v] = 0;
    }
    res.max_requests = std::max(res.max_requests, round.max_requests);
    if (keep_history) res.history.push_back(round);
    if (round.tokens_sent > 0) std::erase_if(active, [&](NodeId u) { return res.token[u] != 0; });
  }
  for (NodeId v = 0; v < n; ++v) {
    res.max_sent = std::max(res.max_sent, res.sent[v]);
    if (res.sent[v] > params.K) res.bad_at[v] = 1;
    if (res.bad_at[v]) res.bad = true;
  }

  // Round T+1 against S0 with the request values of that round.
  res.final_set = s0;
  const std::uint64_t last = params.T + 1;
  const auto cls = classify_connectivity(g, s0);
  for (NodeId u = 0; u < n; ++u) {
    if (s0.contains(u) || g.degree(u) == 0) continue;
    const bool pulls = res.bad || cls[u] == Connectivity::strong;
    if (pulls && s0.contains(request_target(g, rng, u, last))) res.final_pull_winners.push_back(u);
  }
  for (NodeId u : res.final_pull_winners) res.final_set.insert(u);
  if (!res.bad)
    for (NodeId u : res.token_holders) res.final_set.insert(u);
  return res;
}

struct ProbabilityEstimate {
  double p = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo estimate of Pr(u in S_{T+1}) under VPULL.
inline ProbabilityEstimate estimate_informing_probability(const Graph& g, std::span<const NodeId> seeds,
                                                          const VpullParams& params, NodeId u,
                                                          std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error("bad-config", "trials must be >= 1");
  if (u >= g.node_count()) throw Error("bad-node", "node " + std::to_string(u) + " out of range");
  if (std::find(seeds.begin(), seeds.end(), u) != seeds.end())
    throw Error("bad-config", "node " + std::to_string(u) + " is already informed");
  const RngPolicy master(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i)
    if (run_vpull(g, seeds, params, master.derive(i)).final_set.contains(u)) ++hits;
  ProbabilityEstimate e;
  e.trials = trials;
  e.p = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(trials));
  return e;
}

}  // namespace rumorlab
