#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rumorlab/graph.hpp"
#include "rumorlab/parallel.hpp"
#include "rumorlab/protocol.hpp"
#include "rumorlab/rng.hpp"
#include "rumorlab/stats.hpp"
#include "rumorlab/vpull.hpp"

namespace rumorlab {

/// Why S_vpull escaped S_rpull. "token" never occurs when the coupling is
/// implemented correctly.
enum class ViolationCause : std::uint8_t { none, bad_execution, strong_final_pull, token };

inline std::string to_string(ViolationCause c) {
  switch (c) {
    case ViolationCause::none: return "none";
    case ViolationCause::bad_execution: return "bad-execution";
    case ViolationCause::strong_final_pull: return "strong-final-pull";
    case ViolationCause::token: return "token";
  }
  return "?";
}

struct CoupledRun {
  std::uint64_t seed = 0;
  InformedSet rpull;   // S_T of random RPULL
  InformedSet vpull;   // S_{T+1} of VPULL
  bool violated = false;
  bool bad = false;
  ViolationCause cause = ViolationCause::none;
  std::vector<NodeId> violators;  // S_vpull minus S_rpull
  std::uint64_t tokens = 0;
};

/// Runs T rounds of random RPULL and T+1 rounds of VPULL on one RngPolicy.
/// Both read request targets and serve keys from the same counters, so a
/// token granted in VPULL always lands on a node RPULL has informed too.
inline CoupledRun coupled_run(const Graph& g, std::span<const NodeId> seeds, const VpullParams& params,
                              std::uint64_t seed) {
  CoupledRun run;
  run.seed = seed;
  ProtocolSpec spec;
  spec.protocol = Protocol::rpull;
  spec.mode = ServeMode::random;
  spec.max_rounds = params.T;
  spec.seed = seed;
  Simulation sim(g, seeds, spec);
  while (sim.round() < params.T && !sim.done()) sim.step();
  run.rpull = sim.state().informed();

  VpullResult v = run_vpull(g, seeds, params, RngPolicy(seed));
  run.vpull = v.final_set;
  run.bad = v.bad;
  run.tokens = v.token_holders.size();
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (run.vpull.contains(u) && !run.rpull.contains(u)) run.violators.push_back(u);
  run.violated = !run.violators.empty();
  if (run.violated) {
    if (run.bad) {
      run.cause = ViolationCause::bad_execution;
    } else {
      run.cause = ViolationCause::strong_final_pull;
      for (NodeId u : run.violators)
        if (v.token[u]) run.cause = ViolationCause::token;
    }
  }
  return run;
}

struct ViolationReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t bad_executions = 0;
  std::uint64_t by_bad_execution = 0;
  std::uint64_t by_strong_final_pull = 0;
  std::uint64_t by_token = 0;
  double rate = 0.0;
  Interval interval;
  double bad_rate = 0.0;
  bool nonstandard_params = false;
  std::vector<CoupledRun> runs;
};

/// Trial i uses seed RngPolicy(seed).derive(i).seed().
inline ViolationReport estimate_violation_rate(const Graph& g, std::span<const NodeId> seeds,
                                               const VpullParams& params, std::uint64_t trials,
                                               std::uint64_t seed, bool keep_runs = false) {
  if (trials < 1) throw Error("bad-config", "trials must be >= 1");
  const RngPolicy master(seed);
  auto runs = run_trials(trials, [&](std::uint64_t i) { return coupled_run(g, seeds, params, master.derive(i).seed()); });
  ViolationReport rep;
  rep.trials = trials;
  rep.nonstandard_params = params.nonstandard();
  for (const auto& r : runs) {
    rep.bad_executions += r.bad ? 1 : 0;
    if (!r.violated) continue;
    ++rep.violations;
    switch (r.cause) {
      case ViolationCause::bad_execution: ++rep.by_bad_execution; break;
      case ViolationCause::strong_final_pull: ++rep.by_strong_final_pull; break;
      case ViolationCause::token: ++rep.by_token; break;
      case ViolationCause::none: break;
    }
  }
  rep.rate = static_cast<double>(rep.violations) / static_cast<double>(trials);
  rep.bad_rate = static_cast<double>(rep.bad_executions) / static_cast<double>(trials);
  rep.interval = wilson_interval(rep.violations, trials);
  if (keep_runs) rep.runs = std::move(runs);
  return rep;
}

}  // namespace rumorlab
