#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rumorlab/coupling.hpp"
#include "rumorlab/dominance.hpp"
#include "rumorlab/generators.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/parallel.hpp"
#include "rumorlab/protocol.hpp"
#include "rumorlab/rng.hpp"
#include "rumorlab/stats.hpp"
#include "rumorlab/vpull.hpp"

namespace rumorlab {

/// Seed of trial i in stream `stream` of an experiment seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  return RngPolicy(seed).derive(stream).derive(i).seed();
}

struct ProtocolSample {
  std::string protocol;
  std::vector<double> times;  // broadcast times; timeouts enter as the cap
  std::uint64_t timeouts = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
  double q99 = 0.0;
};

namespace detail {

inline ProtocolSample sample_broadcast(const Graph& g, const std::vector<NodeId>& seeds, ProtocolSpec spec,
                                       const std::string& label, std::uint64_t trials, std::uint64_t seed,
                                       std::uint64_t stream, const SeparationLayout* layout = nullptr) {
  auto results = run_trials(trials, [&](std::uint64_t i) {
    ProtocolSpec s = spec;
    s.seed = trial_seed(seed, stream, i);
    AdversaryStrategy adv;
    if (s.restricted() && s.mode == ServeMode::adversarial) adv = make_adversary(s.adversary, layout);
    auto r = run_until_broadcast(g, seeds, s, adv, {}, false);
    return r.broadcast_time ? static_cast<double>(*r.broadcast_time) : -1.0;
  });
  ProtocolSample out;
  out.protocol = label;
  for (double t : results) {
    if (t < 0) {
      ++out.timeouts;
      t = static_cast<double>(spec.max_rounds);
    }
    out.times.push_back(t);
  }
  out.mean = mean(out.times);
  out.std_error = standard_error(out.times);
  out.median = median(out.times);
  out.q99 = quantile(out.times, 0.99);
  return out;
}

inline ProtocolSpec make_spec(Protocol p, ServeMode m, std::uint64_t max_rounds, std::string adversary = "lowest-id") {
  ProtocolSpec s;
  s.protocol = p;
  s.mode = m;
  s.max_rounds = max_rounds;
  s.adversary = std::move(adversary);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Paths.

struct TreePathReport {
  std::size_t q = 0;              // nodes on the path
  std::size_t path_cost = 0;      // D_p - d_r
  std::optional<Rational> exact;  // exact E[τ] for PULL when small enough
  std::vector<ProtocolSample> samples;  // pull, rpull-random, rpull-adversarial
  std::vector<double> ratios;           // mean / (D_p - d_r)
};

/// Path 0..q-1 with S0 = {0}; PULL, random and adversarial RPULL.
inline TreePathReport exp_tree_path(std::size_t q, std::uint64_t trials, std::uint64_t seed) {
  if (q < 2) throw Error("bad-size", "path needs q >= 2");
  if (trials < 1) throw Error("bad-config", "trials must be >= 1");
  Graph g = gen_basic(BasicKind::path, q);
  const std::vector<NodeId> seeds{0};
  PathDescriptor p;
  for (NodeId v = 0; v < q; ++v) p.nodes.push_back(v);
  TreePathReport rep;
  rep.q = q;
  rep.path_cost = path_degree_sum(g, p).sum - g.degree(0);
  if (q - 1 <= kMaxExactNodes) rep.exact = exact_expected_broadcast_time(g, seeds, ExactProtocol::pull);
  const std::uint64_t cap = 1000 * q + 1000;
  rep.samples.push_back(detail::sample_broadcast(g, seeds, detail::make_spec(Protocol::pull, ServeMode::random, cap),
                                                 "pull", trials, seed, 0));
  rep.samples.push_back(detail::sample_broadcast(g, seeds, detail::make_spec(Protocol::rpull, ServeMode::random, cap),
                                                 "rpull-random", trials, seed, 1));
  rep.samples.push_back(detail::sample_broadcast(
      g, seeds, detail::make_spec(Protocol::rpull, ServeMode::adversarial, cap), "rpull-adversarial", trials, seed, 2));
  for (const auto& s : rep.samples) rep.ratios.push_back(s.mean / static_cast<double>(rep.path_cost));
  return rep;
}

// ---------------------------------------------------------------------------
// Whole trees.

struct TreeFullReport {
  std::size_t n = 0;
  std::size_t max_path_cost = 0;  // max over paths of D_p
  double bound = 0.0;             // max D_p + Δ log2 n
  std::vector<ProtocolSample> samples;  // rpull-random, rpull-adversarial
  bool within_bound = true;             // every 99% quantile <= bound
};

inline TreeFullReport exp_tree_full(const Graph& g, NodeId source, std::uint64_t trials, std::uint64_t seed) {
  if (!is_tree(g)) throw Error("not-a-tree", "tree experiment needs a tree");
  if (source >= g.node_count()) throw Error("bad-node", "source out of range");
  TreeFullReport rep;
  rep.n = g.node_count();
  rep.max_path_cost = max_path_degree_sum(g);
  rep.bound = static_cast<double>(rep.max_path_cost) +
              static_cast<double>(g.max_degree()) * std::log2(static_cast<double>(g.node_count()));
  const std::vector<NodeId> seeds{source};
  const auto cap = static_cast<std::uint64_t>(std::ceil(20 * rep.bound)) + 100;
  rep.samples.push_back(detail::sample_broadcast(g, seeds, detail::make_spec(Protocol::rpull, ServeMode::random, cap),
                                                 "rpull-random", trials, seed, 0));
  rep.samples.push_back(detail::sample_broadcast(
      g, seeds, detail::make_spec(Protocol::rpull, ServeMode::adversarial, cap), "rpull-adversarial", trials, seed, 1));
  for (const auto& s : rep.samples) rep.within_bound = rep.within_bound && s.q99 <= rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------
// Separation graph.

struct SeparationMetrics {
  std::vector<std::uint32_t> informed_parts;  // X_t for t = 1, 2, ...
  std::optional<std::uint64_t> zeta_root_round;  // first round r_zeta is informed
  std::optional<std::uint64_t> zeta_first_round;  // first round any D_zeta node is informed
  std::optional<std::uint64_t> zeta_full_round;   // first round all of D_zeta is informed
  std::optional<std::uint64_t> broadcast_time;
  bool stall_respected = true;  // r never served r_zeta while another request was pending
};

/// One run on a separation graph with per-round bookkeeping.
inline SeparationMetrics run_separation_trial(const Graph& g, const SeparationLayout& layout, NodeId source,
                                              ServeMode mode, std::uint64_t max_rounds, std::uint64_t seed) {
  ProtocolSpec spec = detail::make_spec(Protocol::rpull, mode, max_rounds, "stalling");
  spec.seed = seed;
  AdversaryStrategy adv;
  if (mode == ServeMode::adversarial) adv = stalling_adversary(layout);
  const std::vector<NodeId> seeds{source};
  Simulation sim(g, seeds, spec, adv);
  SeparationMetrics m;
  std::vector<std::vector<std::uint8_t>> part_hit(layout.copies.size(), std::vector<std::uint8_t>(layout.m, 0));
  std::uint32_t parts = 0;
  std::vector<std::size_t> zeta_count(layout.copies.size(), 0);
  auto note = [&](NodeId v, std::uint64_t t) {
    for (std::size_t c = 0; c < layout.copies.size(); ++c) {
      const auto& copy = layout.copies[c];
      int p = copy.part_of(v);
      if (p >= 0 && !part_hit[c][p]) {
        part_hit[c][p] = 1;
        ++parts;
      }
      if (c == 0 && copy.zeta.contains(v)) {
        if (!m.zeta_first_round) m.zeta_first_round = t;
        if (v == copy.r_zeta() && !m.zeta_root_round) m.zeta_root_round = t;
        if (++zeta_count[c] == copy.zeta.size()) m.zeta_full_round = t;
      }
    }
  };
  note(source, 0);
  if (sim.done()) m.broadcast_time = 0;
  while (!sim.done() && sim.round() < max_rounds) {
    const RoundTrace& trace = sim.step();
    for (NodeId v : trace.newly_informed) note(v, trace.round);
    for (const auto& s : trace.serves)
      for (const auto& copy : layout.copies)
        if (s.server == copy.r && s.chosen == copy.r_zeta() && s.requests > 1 && mode == ServeMode::adversarial)
          m.stall_respected = false;
    m.informed_parts.push_back(parts);
    if (sim.done()) m.broadcast_time = sim.round();
  }
  return m;
}

struct SeparationPoint {
  std::size_t l = 0;
  std::size_t c = 0;
  bool doubled = false;
  std::size_t nodes = 0;
  std::uint64_t timeout = 0;          // 50 sqrt(N)
  double random_median = 0.0;
  double adversarial_median = 0.0;
  double ratio = 0.0;                 // adversarial / random medians
  double random_bound = 0.0;          // 40 log2^2 N
  std::uint64_t random_timeouts = 0;
  std::uint64_t adversarial_timeouts = 0;
  double zeta_phase_median = 0.0;     // random runs: first to full D_zeta
  bool stall_respected = true;
  std::vector<SeparationMetrics> random_runs;
  std::vector<SeparationMetrics> adversarial_runs;
};

struct SeparationReport {
  std::vector<SeparationPoint> points;
  bool ratio_grows = true;  // strictly increasing over the l values given
};

/// Medians of random and stalled adversarial RPULL from r_alpha (or `source`
/// when given) on gen_separation(l, c, doubled) for each l.
inline SeparationReport exp_separation(const std::vector<std::size_t>& l_values, std::size_t c, std::uint64_t trials,
                                       std::uint64_t seed, bool doubled = false,
                                       std::optional<NodeId> source = std::nullopt) {
  if (trials < 1) throw Error("bad-config", "trials must be >= 1");
  SeparationReport rep;
  for (std::size_t l : l_values) {
    auto [g, layout] = gen_separation(l, c, doubled);
    SeparationPoint pt;
    pt.l = l;
    pt.c = c;
    pt.doubled = doubled;
    pt.nodes = g.node_count();
    pt.timeout = static_cast<std::uint64_t>(std::ceil(50.0 * std::sqrt(static_cast<double>(pt.nodes))));
    const double lg = std::log2(static_cast<double>(pt.nodes));
    pt.random_bound = 40.0 * lg * lg;
    const NodeId src = source.value_or(layout.copies.front().r_alpha());
    if (src >= g.node_count()) throw Error("bad-node", "source out of range");
    const auto& gr = g;
    const auto& lay = layout;
    pt.random_runs = run_trials(trials, [&](std::uint64_t i) {
      return run_separation_trial(gr, lay, src, ServeMode::random, pt.timeout, trial_seed(seed, 2 * l, i));
    });
    pt.adversarial_runs = run_trials(trials, [&](std::uint64_t i) {
      return run_separation_trial(gr, lay, src, ServeMode::adversarial, pt.timeout, trial_seed(seed, 2 * l + 1, i));
    });
    std::vector<double> rnd, adv, zeta;
    for (const auto& m : pt.random_runs) {
      if (!m.broadcast_time) ++pt.random_timeouts;
      rnd.push_back(static_cast<double>(m.broadcast_time.value_or(pt.timeout)));
      if (m.zeta_first_round && m.zeta_full_round)
        zeta.push_back(static_cast<double>(*m.zeta_full_round - *m.zeta_first_round));
    }
    for (const auto& m : pt.adversarial_runs) {
      if (!m.broadcast_time) ++pt.adversarial_timeouts;
      adv.push_back(static_cast<double>(m.broadcast_time.value_or(pt.timeout)));
      pt.stall_respected = pt.stall_respected && m.stall_respected;
    }
    pt.random_median = median(rnd);
    pt.adversarial_median = median(adv);
    pt.ratio = pt.adversarial_median / pt.random_median;
    if (!zeta.empty()) pt.zeta_phase_median = median(zeta);
    if (!rep.points.empty() && !(pt.ratio > rep.points.back().ratio)) rep.ratio_grows = false;
    rep.points.push_back(std::move(pt));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tightness graph.

struct TightnessPoint {
  std::size_t k = 0;
  std::size_t nodes = 0;
  double degree_ratio = 0.0;       // Δ/δ
  double scale = 0.0;              // (Δ/δ) log2 n
  double first_round_win = 0.0;    // Pr(a informed in round 1), averaged over A
  double m_star = 0.0;             // 99% quantile of rounds until A ⊆ S
  double mean_rounds = 0.0;
  std::uint64_t timeouts = 0;
  double pull_one_round = 0.0;     // fraction of trials where PULL informs A in round 1
  std::vector<double> rounds;      // per trial
};

struct TightnessReport {
  std::vector<TightnessPoint> points;
};

inline TightnessPoint tightness_point(std::size_t k, std::uint64_t trials, std::uint64_t seed,
                                      std::uint64_t max_rounds = 1'000'000) {
  auto [g, layout] = gen_tightness(k);
  TightnessPoint pt;
  pt.k = k;
  pt.nodes = g.node_count();
  pt.degree_ratio = static_cast<double>(g.max_degree()) / static_cast<double>(g.min_degree());
  pt.scale = pt.degree_ratio * std::log2(static_cast<double>(pt.nodes));
  const std::vector<NodeId>& seeds = layout.b;
  const std::size_t a_count = layout.a.size();  // A occupies ids 0..|A|-1
  struct Trial {
    double rounds = -1.0;
    double first_round = 0.0;
    double pull_ok = 0.0;
  };
  const auto& gr = g;
  auto results = run_trials(trials, [&](std::uint64_t i) {
    Trial out;
    ProtocolSpec spec = detail::make_spec(Protocol::rpull, ServeMode::random, max_rounds);
    spec.seed = trial_seed(seed, k, i);
    Simulation sim(gr, seeds, spec);
    std::size_t a_informed = 0;
    while (sim.round() < max_rounds) {
      const RoundTrace& trace = sim.step();
      for (NodeId v : trace.newly_informed)
        if (v < a_count) ++a_informed;
      if (sim.round() == 1) out.first_round = static_cast<double>(a_informed) / static_cast<double>(a_count);
      if (a_informed == a_count) {
        out.rounds = static_cast<double>(sim.round());
        break;
      }
    }
    ProtocolSpec pull = detail::make_spec(Protocol::pull, ServeMode::random, 1);
    pull.seed = spec.seed;
    Simulation once(gr, seeds, pull);
    const RoundTrace& t1 = once.step();
    std::size_t a_pulled = 0;
    for (NodeId v : t1.newly_informed)
      if (v < a_count) ++a_pulled;
    out.pull_ok = a_pulled == a_count ? 1.0 : 0.0;
    return out;
  });
  double first = 0.0, pull_ok = 0.0;
  for (const auto& r : results) {
    if (r.rounds < 0) ++pt.timeouts;
    pt.rounds.push_back(r.rounds < 0 ? static_cast<double>(max_rounds) : r.rounds);
    first += r.first_round;
    pull_ok += r.pull_ok;
  }
  pt.first_round_win = first / static_cast<double>(trials);
  pt.pull_one_round = pull_ok / static_cast<double>(trials);
  pt.m_star = quantile(pt.rounds, 0.99);
  pt.mean_rounds = mean(pt.rounds);
  return pt;
}

/// S0 = B on gen_tightness(k): rounds of random RPULL until all of A is
/// informed, against one round of PULL.
inline TightnessReport exp_tightness(const std::vector<std::size_t>& k_values, std::uint64_t trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw Error("bad-config", "trials must be >= 1");
  TightnessReport rep;
  for (std::size_t k : k_values) rep.points.push_back(tightness_point(k, trials, seed));
  return rep;
}

// ---------------------------------------------------------------------------
// Small graphs with at most four uninformed nodes.

struct SuiteCase {
  std::string name;
  Graph graph;
  std::vector<NodeId> seeds;
};

inline std::vector<SuiteCase> small_suite() {
  std::vector<SuiteCase> out;
  out.push_back({"path3-end", gen_basic(BasicKind::path, 3), {0}});
  out.push_back({"path4-end", gen_basic(BasicKind::path, 4), {0}});
  out.push_back({"path5-end", gen_basic(BasicKind::path, 5), {0}});
  out.push_back({"path5-mid", gen_basic(BasicKind::path, 5), {2}});
  out.push_back({"star5-center", gen_basic(BasicKind::star, 5), {0}});
  out.push_back({"star5-leaf", gen_basic(BasicKind::star, 5), {1}});
  out.push_back({"complete5", gen_basic(BasicKind::complete, 5), {0}});
  auto fragment = [&](const std::string& name, std::size_t a, std::size_t b, std::size_t per_b, std::size_t size) {
    auto [g, layout] = gen_tightness_fragment(a, b, per_b, size);
    std::vector<NodeId> seeds = layout.b;
    for (const auto& cl : layout.cliques)
      for (std::size_t x = 1; x < cl.size(); ++x) seeds.push_back(cl[x]);
    std::sort(seeds.begin(), seeds.end());
    out.push_back({name, std::move(g), std::move(seeds)});
  };
  fragment("tight-2x2x1x3", 2, 2, 1, 3);
  fragment("tight-2x1x2x2", 2, 1, 2, 2);
  fragment("tight-1x2x1x2", 1, 2, 1, 2);
  return out;
}

/// T = ceil(8 (Δ/δ) log2 n).
inline std::uint64_t dominance_rounds(const Graph& g) {
  const double ratio = static_cast<double>(g.max_degree()) / static_cast<double>(std::max<std::size_t>(g.min_degree(), 1));
  return static_cast<std::uint64_t>(std::ceil(8.0 * ratio * std::log2(static_cast<double>(g.node_count())) - 1e-9));
}

struct DominanceCaseReport {
  std::string name;
  std::uint64_t rounds = 0;
  std::uint64_t samples = 0;
  OutcomeDistribution exact_pull;
  EmpiricalDominanceReport test;
};

/// Empirical law of S_T ∩ U under random RPULL against the exact law of one
/// PULL round, over every monotone family.
inline DominanceCaseReport dominance_case(const SuiteCase& sc, std::uint64_t samples, std::uint64_t seed,
                                          double threshold = 3.0) {
  if (samples < 1) throw Error("bad-config", "samples must be >= 1");
  DominanceCaseReport rep;
  rep.name = sc.name;
  rep.samples = samples;
  rep.rounds = dominance_rounds(sc.graph);
  rep.exact_pull = exact_distribution(sc.graph, sc.seeds, ExactProtocol::pull, 1);
  const auto& ref = rep.exact_pull;
  auto masks = run_trials(samples, [&](std::uint64_t i) {
    ProtocolSpec spec = detail::make_spec(Protocol::rpull, ServeMode::random, rep.rounds);
    spec.seed = trial_seed(seed, 0, i);
    Simulation sim(sc.graph, sc.seeds, spec);
    while (sim.round() < rep.rounds && !sim.done()) sim.step();
    return ref.mask_of(sim.state().informed());
  });
  rep.test = empirical_vs_exact(masks, ref, threshold);
  return rep;
}

}  // namespace rumorlab
