#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumorlab/error.hpp"
#include "rumorlab/generators.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/rng.hpp"

namespace rumorlab {

/// Membership bitmap of informed nodes with a cached count.
class InformedSet {
 public:
  InformedSet() = default;
  explicit InformedSet(std::size_t n) : member_(n, 0) {}
  InformedSet(std::size_t n, std::span<const NodeId> seeds) : member_(n, 0) {
    for (NodeId v : seeds) insert(v);
  }

  std::size_t size() const noexcept { return member_.size(); }
  std::size_t count() const noexcept { return count_; }
  bool full() const noexcept { return count_ == member_.size(); }
  bool contains(NodeId v) const { return member_[v] != 0; }
  bool operator[](NodeId v) const { return member_[v] != 0; }

  /// Returns true when v was not yet a member.
  bool insert(NodeId v) {
    if (v >= member_.size()) throw Error("bad-node", "node " + std::to_string(v) + " out of range");
    if (member_[v]) return false;
    member_[v] = 1;
    ++count_;
    return true;
  }

  std::vector<NodeId> members() const {
    std::vector<NodeId> out;
    out.reserve(count_);
    for (NodeId v = 0; v < member_.size(); ++v)
      if (member_[v]) out.push_back(v);
    return out;
  }

  bool subset_of(const InformedSet& other) const {
    for (NodeId v = 0; v < member_.size(); ++v)
      if (member_[v] && !other.member_[v]) return false;
    return true;
  }

  friend bool operator==(const InformedSet&, const InformedSet&) = default;

 private:
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

/// Informed set plus the incremental bookkeeping the round loop needs:
/// d_S(u) for every node and the frontier of uninformed nodes with d_S(u) > 0.
/// Only frontier nodes can learn anything by pulling, and since randomness is
/// counter-based, skipping the others changes no outcome.
class SpreadState {
 public:
  SpreadState(const Graph& g, std::span<const NodeId> seeds)
      : graph_(&g), informed_(g.node_count()), informed_degree_(g.node_count(), 0),
        frontier_pos_(g.node_count(), kNoNode) {
    if (seeds.empty()) throw Error("empty-seed", "initial informed set must be nonempty");
    for (NodeId v : seeds) inform(v);
  }

  const Graph& graph() const noexcept { return *graph_; }
  const InformedSet& informed() const noexcept { return informed_; }
  bool contains(NodeId v) const { return informed_.contains(v); }
  std::size_t count() const noexcept { return informed_.count(); }
  bool full() const noexcept { return informed_.full(); }
  std::uint32_t informed_degree(NodeId u) const { return informed_degree_[u]; }
  std::span<const NodeId> frontier() const noexcept { return frontier_; }
  std::span<const NodeId> informed_nodes() const noexcept { return informed_list_; }

  void inform(NodeId v) {
    if (!informed_.insert(v)) return;
    informed_list_.push_back(v);
    if (frontier_pos_[v] != kNoNode) {
      NodeId last = frontier_.back();
      frontier_[frontier_pos_[v]] = last;
      frontier_pos_[last] = frontier_pos_[v];
      frontier_.pop_back();
      frontier_pos_[v] = kNoNode;
    }
    for (NodeId w : graph_->neighbors(v)) {
      if (++informed_degree_[w] == 1 && !informed_.contains(w)) {
        frontier_pos_[w] = static_cast<NodeId>(frontier_.size());
        frontier_.push_back(w);
      }
    }
  }

 private:
  const Graph* graph_;
  InformedSet informed_;
  std::vector<std::uint32_t> informed_degree_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> frontier_pos_;
  std::vector<NodeId> informed_list_;
};

/// One pull request u -> target.
struct Request {
  NodeId requester;
  NodeId target;
  friend auto operator<=>(const Request&, const Request&) = default;
};

/// Requests of a round that reach informed nodes, sorted by (target,
/// requester). Requests aimed at uninformed nodes carry nothing and are not
/// materialized; informed nodes never request.
using RequestVector = std::vector<Request>;

struct ServeDecision {
  NodeId server;
  NodeId chosen;
  std::uint32_t requests;  // r_v
};

enum CauseBits : std::uint8_t { kByPull = 1, kByPush = 2 };

struct RoundTrace {
  std::uint64_t round = 0;
  std::vector<NodeId> newly_informed;      // sorted
  std::vector<std::uint8_t> causes;        // CauseBits per newly informed node
  std::vector<std::pair<NodeId, std::uint32_t>> request_counts;  // (v, r_v), r_v >= 1
  std::vector<ServeDecision> serves;       // restricted pull only

  void clear(std::uint64_t t) {
    round = t;
    newly_informed.clear();
    causes.clear();
    request_counts.clear();
    serves.clear();
  }
};

/// What an adversary sees when an informed node must pick one requester.
struct AdversaryView {
  NodeId server;
  std::span<const NodeId> requesters;  // R_v, sorted ascending
  const SpreadState& state;
  std::uint64_t round;
  const Graph& graph;
};

using AdversaryStrategy = std::function<NodeId(const AdversaryView&)>;

inline AdversaryStrategy lowest_id_adversary() {
  return [](const AdversaryView& view) { return view.requesters.front(); };
}

/// At each hub r of the separation graph: never serve r_zeta while someone
/// else asks. Everywhere else: lowest id.
inline AdversaryStrategy stalling_adversary(const SeparationLayout& layout) {
  std::vector<std::pair<NodeId, NodeId>> hubs;  // (r, r_zeta)
  for (const auto& copy : layout.copies) hubs.emplace_back(copy.r, copy.r_zeta());
  return [hubs = std::move(hubs)](const AdversaryView& view) {
    for (auto [hub, zeta] : hubs) {
      if (view.server != hub || view.requesters.size() < 2) continue;
      for (NodeId candidate : view.requesters)
        if (candidate != zeta) return candidate;
    }
    return view.requesters.front();
  };
}

enum class ServeMode { random, adversarial };
enum class PushAcceptance { unlimited, one_per_round };

inline NodeId request_target(const Graph& g, const RngPolicy& rng, NodeId u, std::uint64_t t) {
  auto nb = g.neighbors(u);
  return nb[rng.index(u, t, Purpose::request, nb.size())];
}

inline void draw_requests(const SpreadState& state, const RngPolicy& rng, std::uint64_t t, RequestVector& out) {
  out.clear();
  const Graph& g = state.graph();
  for (NodeId u : state.frontier()) {
    NodeId target = request_target(g, rng, u, t);
    if (state.contains(target)) out.push_back({u, target});
  }
  std::sort(out.begin(), out.end(), [](const Request& a, const Request& b) {
    return a.target != b.target ? a.target < b.target : a.requester < b.requester;
  });
}

inline RequestVector draw_requests(const SpreadState& state, const RngPolicy& rng, std::uint64_t t) {
  RequestVector out;
  draw_requests(state, rng, t, out);
  return out;
}

namespace detail {

inline void record_request_counts(const RequestVector& requests, RoundTrace& trace) {
  for (std::size_t i = 0; i < requests.size();) {
    std::size_t j = i;
    while (j < requests.size() && requests[j].target == requests[i].target) ++j;
    trace.request_counts.emplace_back(requests[i].target, static_cast<std::uint32_t>(j - i));
    i = j;
  }
}

inline void merge_newly(std::vector<NodeId>& nodes, std::uint8_t cause, RoundTrace& trace) {
  // newly_informed/causes are kept sorted; nodes may be unsorted.
  std::sort(nodes.begin(), nodes.end());
  std::vector<NodeId> merged;
  std::vector<std::uint8_t> merged_causes;
  merged.reserve(nodes.size() + trace.newly_informed.size());
  std::size_t i = 0, j = 0;
  while (i < trace.newly_informed.size() || j < nodes.size()) {
    if (j == nodes.size() || (i < trace.newly_informed.size() && trace.newly_informed[i] < nodes[j])) {
      merged.push_back(trace.newly_informed[i]);
      merged_causes.push_back(trace.causes[i]);
      ++i;
    } else if (i == trace.newly_informed.size() || nodes[j] < trace.newly_informed[i]) {
      merged.push_back(nodes[j]);
      merged_causes.push_back(cause);
      ++j;
    } else {
      merged.push_back(nodes[j]);
      merged_causes.push_back(static_cast<std::uint8_t>(trace.causes[i] | cause));
      ++i;
      ++j;
    }
  }
  trace.newly_informed = std::move(merged);
  trace.causes = std::move(merged_causes);
}

}  // namespace detail

/// Unrestricted pull: every request that hits an informed node succeeds.
inline void resolve_pull(const RequestVector& requests, RoundTrace& trace) {
  detail::record_request_counts(requests, trace);
  std::vector<NodeId> won;
  won.reserve(requests.size());
  for (const auto& r : requests) won.push_back(r.requester);
  detail::merge_newly(won, kByPull, trace);
}

/// Restricted pull: each informed node with R_v nonempty informs exactly one
/// requester. Random mode gives every requester an independent priority key
/// (Purpose::serve, keyed by the requester) and the smallest key wins, which
/// is a uniform pick from R_v. Adversarial mode asks the strategy.
inline void resolve_rpull(const SpreadState& state, const RequestVector& requests, const RngPolicy& rng,
                          std::uint64_t t, ServeMode mode, const AdversaryStrategy& adversary,
                          RoundTrace& trace) {
  if (mode == ServeMode::adversarial && !adversary)
    throw Error("bad-config", "adversarial restricted pull needs an adversary");
  detail::record_request_counts(requests, trace);
  std::vector<NodeId> won;
  std::vector<NodeId> group;
  for (std::size_t i = 0; i < requests.size();) {
    std::size_t j = i;
    while (j < requests.size() && requests[j].target == requests[i].target) ++j;
    const NodeId server = requests[i].target;
    NodeId chosen = kNoNode;
    if (mode == ServeMode::random) {
      std::uint64_t best = 0;
      for (std::size_t x = i; x < j; ++x) {
        std::uint64_t key = rng.bits(requests[x].requester, t, Purpose::serve);
        if (chosen == kNoNode || key < best) {
          best = key;
          chosen = requests[x].requester;
        }
      }
    } else {
      group.clear();
      for (std::size_t x = i; x < j; ++x) group.push_back(requests[x].requester);
      chosen = adversary(AdversaryView{server, group, state, t, state.graph()});
      if (!std::binary_search(group.begin(), group.end(), chosen))
        throw Error("illegal-adversary-choice",
                    "node " + std::to_string(chosen) + " did not request from " + std::to_string(server));
    }
    trace.serves.push_back({server, chosen, static_cast<std::uint32_t>(j - i)});
    won.push_back(chosen);
    i = j;
  }
  detail::merge_newly(won, kByPull, trace);
}

/// Each informed node pushes to a uniform neighbor. With `one_per_round` an
/// uninformed node accepts only one incoming push, which cannot change who
/// ends up informed for a single rumor.
inline void resolve_push(const SpreadState& state, const RngPolicy& rng, std::uint64_t t,
                         PushAcceptance acceptance, RoundTrace& trace) {
  const Graph& g = state.graph();
  std::vector<NodeId> hit;
  for (NodeId v : state.informed_nodes()) {
    auto nb = g.neighbors(v);
    if (nb.empty()) continue;
    NodeId target = nb[rng.index(v, t, Purpose::push, nb.size())];
    if (!state.contains(target)) hit.push_back(target);
  }
  (void)acceptance;  // a node hit k times is informed once under either rule
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
  detail::merge_newly(hit, kByPush, trace);
}

// ---------------------------------------------------------------------------
// Protocol selection and the run loop.

enum class Protocol { pull, rpull, push, push_pull, push_rpull };

inline std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::pull: return "pull";
    case Protocol::rpull: return "rpull";
    case Protocol::push: return "push";
    case Protocol::push_pull: return "push-pull";
    case Protocol::push_rpull: return "push-rpull";
  }
  return "?";
}

inline Protocol protocol_from_string(const std::string& name) {
  if (name == "pull") return Protocol::pull;
  if (name == "rpull") return Protocol::rpull;
  if (name == "push") return Protocol::push;
  if (name == "push-pull" || name == "push_pull") return Protocol::push_pull;
  if (name == "push-rpull" || name == "push_rpull") return Protocol::push_rpull;
  throw Error("bad-config", "unknown protocol '" + name + "'");
}

inline std::string to_string(ServeMode m) { return m == ServeMode::random ? "random" : "adversarial"; }

inline ServeMode serve_mode_from_string(const std::string& name) {
  if (name == "random") return ServeMode::random;
  if (name == "adversarial") return ServeMode::adversarial;
  throw Error("bad-config", "unknown serve mode '" + name + "'");
}

struct ProtocolSpec {
  Protocol protocol = Protocol::pull;
  ServeMode mode = ServeMode::random;
  std::string adversary = "lowest-id";
  std::uint64_t max_rounds = 100000;
  std::uint64_t seed = 1;

  bool restricted() const { return protocol == Protocol::rpull || protocol == Protocol::push_rpull; }
  bool pushes() const {
    return protocol == Protocol::push || protocol == Protocol::push_pull || protocol == Protocol::push_rpull;
  }
  bool pulls() const { return protocol != Protocol::push; }
};

inline void to_json(nlohmann::json& j, const ProtocolSpec& s) {
  j = nlohmann::json{{"protocol", to_string(s.protocol)},
                     {"mode", to_string(s.mode)},
                     {"adversary", s.adversary},
                     {"max_rounds", s.max_rounds},
                     {"seed", s.seed}};
}

inline void from_json(const nlohmann::json& j, ProtocolSpec& s) {
  if (!j.is_object()) throw Error("bad-config", "protocol_spec must be a JSON object");
  s = ProtocolSpec{};
  if (j.contains("protocol")) s.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  if (j.contains("mode")) s.mode = serve_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("adversary") && !j.at("adversary").is_null()) s.adversary = j.at("adversary").get<std::string>();
  if (j.contains("max_rounds")) s.max_rounds = j.at("max_rounds").get<std::uint64_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (s.max_rounds < 1) throw Error("bad-config", "max_rounds must be >= 1");
}

/// One step of the chosen protocol against the round-start state. The state
/// is not modified; apply the trace afterwards.
inline void step(const SpreadState& state, const ProtocolSpec& spec, const RngPolicy& rng, std::uint64_t t,
                 const AdversaryStrategy& adversary, RequestVector& scratch, RoundTrace& trace) {
  trace.clear(t);
  if (spec.pulls()) {
    draw_requests(state, rng, t, scratch);
    if (spec.restricted())
      resolve_rpull(state, scratch, rng, t, spec.mode, adversary, trace);
    else
      resolve_pull(scratch, trace);
  }
  if (spec.pushes()) resolve_push(state, rng, t, PushAcceptance::unlimited, trace);
}

inline void apply(SpreadState& state, const RoundTrace& trace) {
  for (NodeId v : trace.newly_informed) state.inform(v);
}

inline RoundTrace step_pull(const SpreadState& state, const RngPolicy& rng, std::uint64_t t) {
  RoundTrace trace;
  trace.clear(t);
  resolve_pull(draw_requests(state, rng, t), trace);
  return trace;
}

inline RoundTrace step_rpull(const SpreadState& state, const RngPolicy& rng, std::uint64_t t, ServeMode mode,
                             const AdversaryStrategy& adversary = {}) {
  RoundTrace trace;
  trace.clear(t);
  resolve_rpull(state, draw_requests(state, rng, t), rng, t, mode, adversary, trace);
  return trace;
}

inline RoundTrace step_push(const SpreadState& state, const RngPolicy& rng, std::uint64_t t,
                            PushAcceptance acceptance = PushAcceptance::unlimited) {
  RoundTrace trace;
  trace.clear(t);
  resolve_push(state, rng, t, acceptance, trace);
  return trace;
}

/// Push and (restricted) pull in the same round, both against round-start S.
inline RoundTrace step_combined(const SpreadState& state, const RngPolicy& rng, std::uint64_t t, Protocol combo,
                                ServeMode mode = ServeMode::random, const AdversaryStrategy& adversary = {}) {
  if (combo != Protocol::push_pull && combo != Protocol::push_rpull)
    throw Error("bad-config", "combined step needs push-pull or push-rpull");
  ProtocolSpec spec;
  spec.protocol = combo;
  spec.mode = mode;
  RequestVector scratch;
  RoundTrace trace;
  step(state, spec, rng, t, adversary, scratch, trace);
  return trace;
}

inline AdversaryStrategy make_adversary(const std::string& name, const SeparationLayout* layout) {
  if (name == "lowest-id" || name.empty()) return lowest_id_adversary();
  if (name == "stalling") {
    if (!layout) throw Error("bad-config", "stalling adversary needs a separation graph");
    return stalling_adversary(*layout);
  }
  throw Error("bad-config", "unknown adversary '" + name + "'");
}

struct RoundSummary {
  std::uint64_t round;
  std::size_t informed;
  std::size_t new_count;
};

/// Round-by-round driver around one SpreadState.
class Simulation {
 public:
  Simulation(const Graph& g, std::span<const NodeId> seeds, ProtocolSpec spec, AdversaryStrategy adversary = {})
      : state_(g, seeds), spec_(std::move(spec)), rng_(spec_.seed), adversary_(std::move(adversary)) {
    if (spec_.restricted() && spec_.mode == ServeMode::adversarial && !adversary_)
      adversary_ = lowest_id_adversary();
  }

  const RoundTrace& step() {
    ++round_;
    rumorlab::step(state_, spec_, rng_, round_, adversary_, scratch_, trace_);
    apply(state_, trace_);
    return trace_;
  }

  const SpreadState& state() const noexcept { return state_; }
  std::uint64_t round() const noexcept { return round_; }
  bool done() const noexcept { return state_.full(); }
  const ProtocolSpec& spec() const noexcept { return spec_; }

 private:
  SpreadState state_;
  ProtocolSpec spec_;
  RngPolicy rng_;
  AdversaryStrategy adversary_;
  std::uint64_t round_ = 0;
  RequestVector scratch_;
  RoundTrace trace_;
};

struct RunResult {
  std::optional<std::uint64_t> broadcast_time;  // empty on timeout
  std::uint64_t rounds = 0;
  std::vector<RoundSummary> summaries;
  std::string diagnostic;
};

using RoundObserver = std::function<void(const RoundTrace&, const SpreadState&)>;

/// Runs until S_t = V or max_rounds. A graph where some node cannot be
/// reached from the seeds times out immediately with a diagnostic.
inline RunResult run_until_broadcast(const Graph& g, std::span<const NodeId> seeds, const ProtocolSpec& spec,
                                     AdversaryStrategy adversary = {}, const RoundObserver& observer = {},
                                     bool keep_summaries = true) {
  if (spec.max_rounds < 1) throw Error("bad-config", "max_rounds must be >= 1");
  RunResult result;
  auto dist = bfs_distances(g, seeds);
  std::size_t unreachable = static_cast<std::size_t>(std::count(dist.begin(), dist.end(), kNoNode));
  if (unreachable > 0) {
    result.diagnostic = std::to_string(unreachable) + " node(s) unreachable from the initial set";
    return result;
  }
  Simulation sim(g, seeds, spec, std::move(adversary));
  if (sim.done()) {
    result.broadcast_time = 0;
    return result;
  }
  while (sim.round() < spec.max_rounds) {
    const RoundTrace& trace = sim.step();
    if (keep_summaries) result.summaries.push_back({sim.round(), sim.state().count(), trace.newly_informed.size()});
    if (observer) observer(trace, sim.state());
    if (sim.done()) {
      result.broadcast_time = sim.round();
      break;
    }
  }
  result.rounds = sim.round();
  if (!result.broadcast_time) result.diagnostic = "timeout after " + std::to_string(sim.round()) + " rounds";
  return result;
}

}  // namespace rumorlab
