#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rumorlab/rumorlab.hpp"

using namespace rumorlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kCheckFailed = 2;

struct CheckFailure {
  std::string what;
};

struct Loaded {
  Graph graph;
  std::vector<NodeId> default_seeds;
  json layout;  // null when the graph has no named roles
  std::optional<SeparationLayout> separation;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

std::size_t to_size(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error("bad-config", "bad number '" + s + "' in graph spec '" + spec + "'");
  }
}

/// star:N path:N complete:N clique:N cbt:D lct:K separation:L:C[:doubled] tightness:K
Loaded load_graph(const std::string& spec, const std::string& file) {
  Loaded out;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error("bad-config", "cannot open graph file '" + file + "'");
    out.graph = read_edge_list(in);
    out.default_seeds = {0};
    return out;
  }
  if (spec.empty()) throw Error("bad-config", "need --graph or --graph-file");
  auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw Error("bad-config", "graph spec '" + spec + "' is missing a parameter");
    return to_size(parts[i], spec);
  };
  auto expect_parts = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) throw Error("bad-config", "malformed graph spec '" + spec + "'");
  };
  const std::pair<const char*, BasicKind> basics[] = {{"star", BasicKind::star},
                                                      {"path", BasicKind::path},
                                                      {"complete", BasicKind::complete},
                                                      {"clique", BasicKind::clique},
                                                      {"cbt", BasicKind::complete_binary_tree}};
  for (auto [name, k] : basics)
    if (kind == name) {
      expect_parts(2, 2);
      out.graph = gen_basic(k, arg(1));
      out.default_seeds = {0};
      return out;
    }
  if (kind == "lct") {
    expect_parts(2, 2);
    auto [g, lay] = gen_lct(arg(1));
    out.graph = std::move(g);
    out.default_seeds = {lay.root};
    out.layout = layout_json(lay);
  } else if (kind == "separation") {
    expect_parts(3, 4);
    bool doubled = false;
    if (parts.size() == 4) {
      if (parts[3] != "doubled") throw Error("bad-config", "malformed graph spec '" + spec + "'");
      doubled = true;
    }
    auto [g, lay] = gen_separation(arg(1), arg(2), doubled);
    out.graph = std::move(g);
    out.default_seeds = {lay.copies.front().r_alpha()};
    out.layout = layout_json(lay);
    out.separation = std::move(lay);
  } else if (kind == "tightness") {
    expect_parts(2, 2);
    auto [g, lay] = gen_tightness(arg(1));
    out.graph = std::move(g);
    out.default_seeds = lay.b;
    out.layout = layout_json(lay);
  } else {
    throw Error("bad-config", "unknown graph kind '" + kind + "'");
  }
  return out;
}

/// rpull-random -> (rpull, random); the other names map one to one.
ProtocolSpec parse_protocol(const std::string& name) {
  ProtocolSpec s;
  if (name == "rpull-random" || name == "rpull") {
    s.protocol = Protocol::rpull;
  } else if (name == "rpull-adversarial") {
    s.protocol = Protocol::rpull;
    s.mode = ServeMode::adversarial;
  } else if (name == "push-rpull-adversarial") {
    s.protocol = Protocol::push_rpull;
    s.mode = ServeMode::adversarial;
  } else {
    s.protocol = protocol_from_string(name);
  }
  return s;
}

/// Shared flags, plus the JSON config that fills whatever the command line
/// left unset.
struct Common {
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;  // 0 = per-experiment default
  std::string out;
  std::string config;
  bool check = false;
};

struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<void(const json&)> assign;
};

class Bindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& key, const std::string& flag, T& target, const std::string& help) {
    CLI::Option* opt = app->add_option(flag, target, help);
    list_.push_back({key, opt, [&target](const json& j) { target = j.get<T>(); }});
    echo_.push_back([key, &target](json& j) { j[key] = target; });
    return opt;
  }

  void flag(CLI::App* app, const std::string& key, const std::string& name, bool& target, const std::string& help) {
    CLI::Option* opt = app->add_flag(name, target, help);
    list_.push_back({key, opt, [&target](const json& j) { target = j.get<bool>(); }});
    echo_.push_back([key, &target](json& j) { j[key] = target; });
  }

  /// Values from the config object for options absent on the command line.
  void apply(const json& cfg) const {
    if (!cfg.is_object()) throw Error("bad-config", "config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (key == "experiment") continue;
      const Binding* b = nullptr;
      for (const auto& x : list_)
        if (x.key == key) b = &x;
      if (!b) throw Error("bad-config", "unknown config key '" + key + "'");
      if (b->option->count() > 0) continue;
      try {
        b->assign(value);
      } catch (const json::exception& e) {
        throw Error("bad-config", "config key '" + key + "': " + e.what());
      }
    }
  }

  json echo() const {
    json j = json::object();
    for (const auto& f : echo_) f(j);
    return j;
  }

 private:
  std::vector<Binding> list_;
  std::vector<std::function<void(json&)>> echo_;
};

void add_common(CLI::App* app, Bindings& b, Common& c) {
  b.add(app, "seed", "--seed", c.seed, "master seed");
  b.add(app, "trials", "--trials", c.trials, "number of trials");
  b.add(app, "out", "--out", c.out, "output path");
  b.flag(app, "check", "--check", c.check, "exit 2 when the experiment's acceptance check fails");
  app->add_option("--config", c.config, "ExperimentConfig JSON file");
}

void load_config(const std::string& experiment, const Common& c, const Bindings& b) {
  if (c.config.empty()) return;
  std::ifstream in(c.config);
  if (!in) throw Error("bad-config", "cannot open config '" + c.config + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("bad-config", std::string("malformed config: ") + e.what());
  }
  if (cfg.is_object() && cfg.contains("experiment") && cfg.at("experiment") != experiment)
    throw Error("bad-config", "config is for '" + cfg.at("experiment").dump() + "', not '" + experiment + "'");
  b.apply(cfg);
}

std::uint64_t trials_or(const Common& c, std::uint64_t fallback) { return c.trials ? c.trials : fallback; }

/// CSV with the schema preamble, plus `<out>.json` holding the config echo
/// and the summary.
void write_outputs(const Common& c, const std::string& experiment, const std::vector<std::string>& columns,
                   const std::string& rows, const json& config, const json& summary) {
  if (c.out.empty()) return;
  std::ofstream csv(c.out);
  if (!csv) throw Error("bad-config", "cannot write '" + c.out + "'");
  write_csv_preamble(csv, experiment, columns);
  csv << rows;
  std::ofstream meta(c.out + ".json");
  meta << json{{"schema", kCsvSchemaVersion}, {"experiment", experiment}, {"config", config}, {"summary", summary}}
              .dump(2)
       << '\n';
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

std::string opt_str(const std::optional<std::uint64_t>& x) { return x ? std::to_string(*x) : ""; }

json sample_json(const ProtocolSample& s) {
  return {{"protocol", s.protocol}, {"mean", s.mean},         {"std_error", s.std_error},
          {"median", s.median},     {"q99", s.q99},           {"timeouts", s.timeouts}};
}

void add_sample_rows(std::ostringstream& rows, const ProtocolSample& s) {
  for (std::size_t i = 0; i < s.times.size(); ++i) rows << s.protocol << ',' << i << ',' << fmt(s.times[i]) << '\n';
}

void check(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure{what};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rumorlab: restricted pull gossip simulator and dominance lab"};
  app.require_subcommand(1);

  // simulate
  Common sim_c;
  Bindings sim_b;
  std::string sim_graph, sim_graph_file, sim_protocol = "pull", sim_adversary;
  std::vector<NodeId> sim_seeds;
  std::uint64_t sim_max_rounds = 100000;
  auto* sim = app.add_subcommand("simulate", "run a protocol until broadcast");
  add_common(sim, sim_b, sim_c);
  sim_b.add(sim, "graph", "--graph", sim_graph, "graph spec, e.g. star:1000");
  sim_b.add(sim, "graph_file", "--graph-file", sim_graph_file, "edge-list file");
  sim_b.add(sim, "protocol", "--protocol", sim_protocol,
            "pull | rpull-random | rpull-adversarial | push | push-pull | push-rpull");
  sim_b.add(sim, "adversary", "--adversary", sim_adversary, "lowest-id | stalling");
  sim_b.add(sim, "seeds", "--seeds", sim_seeds, "initial informed nodes");
  sim_b.add(sim, "max_rounds", "--max-rounds", sim_max_rounds, "timeout in rounds");

  // gen-graph
  Common gen_c;
  Bindings gen_b;
  std::string gen_graph;
  auto* gen = app.add_subcommand("gen-graph", "write a generated graph as an edge list");
  add_common(gen, gen_b, gen_c);
  gen_b.add(gen, "graph", "--graph", gen_graph, "graph spec");
  gen->add_option("spec", gen_graph, "graph spec (positional)");

  // exp-tree
  Common tree_c;
  Bindings tree_b;
  std::size_t tree_q = 0;
  std::string tree_graph;
  NodeId tree_source = 0;
  auto* tree = app.add_subcommand("exp-tree", "broadcast times on paths and trees");
  add_common(tree, tree_b, tree_c);
  tree_b.add(tree, "q", "--q", tree_q, "path with q nodes");
  tree_b.add(tree, "graph", "--graph", tree_graph, "tree graph spec (e.g. cbt:6)");
  tree_b.add(tree, "source", "--source", tree_source, "source node for --graph");

  // exp-separation
  Common sep_c;
  Bindings sep_b;
  std::vector<std::size_t> sep_l{16, 32};
  std::size_t sep_cc = 1;
  bool sep_doubled = false;
  auto* sep = app.add_subcommand("exp-separation", "stalling adversary against random RPULL");
  add_common(sep, sep_b, sep_c);
  sep_b.add(sep, "l", "--l", sep_l, "l values")->delimiter(',');
  sep_b.add(sep, "c", "--c", sep_cc, "constant c");
  sep_b.flag(sep, "doubled", "--doubled", sep_doubled, "two copies joined at the LCTs");

  // exp-tightness
  Common tight_c;
  Bindings tight_b;
  std::vector<std::size_t> tight_k{4, 6, 8};
  auto* tight = app.add_subcommand("exp-tightness", "rounds until A is informed with S0 = B");
  add_common(tight, tight_b, tight_c);
  tight_b.add(tight, "k", "--k", tight_k, "k values")->delimiter(',');

  // exp-coupling
  Common coup_c;
  Bindings coup_b;
  std::string coup_suite = "small", coup_graph;
  std::uint64_t coup_scale = 1;
  auto* coup = app.add_subcommand("exp-coupling", "coupled RPULL/VPULL violation rate");
  add_common(coup, coup_b, coup_c);
  coup_b.add(coup, "suite", "--suite", coup_suite, "small");
  coup_b.add(coup, "graph", "--graph", coup_graph, "single graph instead of the suite");
  coup_b.add(coup, "scale", "--scale", coup_scale, "multiplier for T' and T");

  // exp-dominance
  Common dom_c;
  Bindings dom_b;
  std::string dom_suite = "small";
  double dom_threshold = 3.0;
  auto* dom = app.add_subcommand("exp-dominance", "empirical RPULL_T against exact PULL_1");
  add_common(dom, dom_b, dom_c);
  dom_b.add(dom, "suite", "--suite", dom_suite, "small");
  dom_b.add(dom, "threshold", "--threshold", dom_threshold, "deficit threshold in standard errors");

  // chernoff
  Common ch_c;
  Bindings ch_b;
  std::vector<double> ch_p{0.5, 0.5, 0.5, 0.5};
  std::vector<double> ch_t{2.0};
  auto* ch = app.add_subcommand("chernoff", "geometric Chernoff bound against sampled tails");
  add_common(ch, ch_b, ch_c);
  ch_b.add(ch, "p", "--p", ch_p, "success probabilities, ascending")->delimiter(',');
  ch_b.add(ch, "t", "--t", ch_t, "slack values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sim) {
      load_config("simulate", sim_c, sim_b);
      Loaded l = load_graph(sim_graph, sim_graph_file);
      ProtocolSpec spec = parse_protocol(sim_protocol);
      spec.max_rounds = sim_max_rounds;
      if (!sim_adversary.empty()) spec.adversary = sim_adversary;
      if (spec.max_rounds < 1) throw Error("bad-config", "max_rounds must be >= 1");
      const std::vector<NodeId> seeds = sim_seeds.empty() ? l.default_seeds : sim_seeds;
      for (NodeId v : seeds)
        if (v >= l.graph.node_count()) throw Error("bad-config", "seed node out of range");
      const std::uint64_t trials = trials_or(sim_c, 1);
      std::ostringstream rows;
      std::vector<double> times;
      std::uint64_t timeouts = 0;
      for (std::uint64_t i = 0; i < trials; ++i) {
        ProtocolSpec s = spec;
        s.seed = trials == 1 ? sim_c.seed : trial_seed(sim_c.seed, 0, i);
        AdversaryStrategy adv;
        if (s.restricted() && s.mode == ServeMode::adversarial)
          adv = make_adversary(s.adversary, l.separation ? &*l.separation : nullptr);
        auto r = run_until_broadcast(l.graph, seeds, s, adv);
        write_trace_csv(rows, std::to_string(i), r.summaries);
        if (trials == 1) {
          if (r.broadcast_time)
            std::cout << "broadcast_time=" << *r.broadcast_time << '\n';
          else
            std::cout << "broadcast_time=timeout (" << r.diagnostic << ")\n";
        }
        if (r.broadcast_time)
          times.push_back(static_cast<double>(*r.broadcast_time));
        else
          ++timeouts;
      }
      json summary{{"trials", trials}, {"timeouts", timeouts}};
      if (!times.empty()) {
        summary["mean"] = mean(times);
        summary["median"] = median(times);
        if (trials > 1)
          std::cout << "trials=" << trials << " mean=" << fmt(mean(times)) << " median=" << fmt(median(times))
                    << " timeouts=" << timeouts << '\n';
      }
      json cfg = sim_b.echo();
      cfg["protocol_spec"] = spec;
      write_outputs(sim_c, "simulate", {"run_id", "t", "informed", "new_count"}, rows.str(), cfg, summary);
      check(timeouts == 0, "some runs timed out");
    } else if (*gen) {
      load_config("gen-graph", gen_c, gen_b);
      Loaded l = load_graph(gen_graph, "");
      std::cout << "nodes=" << l.graph.node_count() << " edges=" << l.graph.edge_count() << '\n';
      if (!gen_c.out.empty()) {
        std::ofstream out(gen_c.out);
        if (!out) throw Error("bad-config", "cannot write '" + gen_c.out + "'");
        write_edge_list(out, l.graph);
        if (!l.layout.is_null()) std::ofstream(gen_c.out + ".json") << l.layout.dump(2) << '\n';
      }
      auto problems = std::vector<std::string>{};
      if (auto d = l.graph.structural_defect(); !d.empty()) problems.push_back(d);
      check(problems.empty(), "structural defect");
    } else if (*tree) {
      load_config("exp-tree", tree_c, tree_b);
      const std::uint64_t trials = trials_or(tree_c, 10000);
      std::ostringstream rows;
      json summary;
      bool ok = true;
      if (tree_q > 0) {
        auto rep = exp_tree_path(tree_q, trials, tree_c.seed);
        summary = {{"q", rep.q}, {"path_cost", rep.path_cost}, {"ratios", rep.ratios}};
        if (rep.exact) summary["exact_pull"] = to_string(*rep.exact);
        json ss = json::array();
        for (const auto& s : rep.samples) {
          ss.push_back(sample_json(s));
          add_sample_rows(rows, s);
          std::cout << s.protocol << " mean=" << fmt(s.mean) << " ratio=" << fmt(s.mean / rep.path_cost) << '\n';
        }
        summary["samples"] = ss;
        if (rep.exact) std::cout << "exact_pull=" << fmt(to_double(*rep.exact)) << '\n';
        for (double r : rep.ratios) ok = ok && r >= 0.5 && r <= 2.0;
      } else {
        Loaded l = load_graph(tree_graph, "");
        auto rep = exp_tree_full(l.graph, tree_source, trials, tree_c.seed);
        summary = {{"n", rep.n}, {"max_path_cost", rep.max_path_cost}, {"bound", rep.bound},
                   {"within_bound", rep.within_bound}};
        json ss = json::array();
        for (const auto& s : rep.samples) {
          ss.push_back(sample_json(s));
          add_sample_rows(rows, s);
          std::cout << s.protocol << " q99=" << fmt(s.q99) << " bound=" << fmt(rep.bound) << '\n';
        }
        summary["samples"] = ss;
        ok = rep.within_bound;
      }
      write_outputs(tree_c, "exp-tree", {"protocol", "trial", "broadcast_time"}, rows.str(), tree_b.echo(), summary);
      check(ok, "tree bound");
    } else if (*sep) {
      load_config("exp-separation", sep_c, sep_b);
      auto rep = exp_separation(sep_l, sep_cc, trials_or(sep_c, 200), sep_c.seed, sep_doubled);
      std::ostringstream rows;
      json pts = json::array();
      bool ok = rep.ratio_grows;
      for (const auto& p : rep.points) {
        auto emit = [&](const char* mode, const std::vector<SeparationMetrics>& runs) {
          for (std::size_t i = 0; i < runs.size(); ++i) {
            const auto& m = runs[i];
            rows << p.l << ',' << mode << ',' << i << ',' << opt_str(m.broadcast_time) << ','
                 << opt_str(m.zeta_root_round) << ',' << opt_str(m.zeta_first_round) << ','
                 << opt_str(m.zeta_full_round) << ',' << (m.stall_respected ? 1 : 0) << '\n';
          }
        };
        emit("random", p.random_runs);
        emit("adversarial", p.adversarial_runs);
        pts.push_back({{"l", p.l},
                       {"nodes", p.nodes},
                       {"timeout", p.timeout},
                       {"random_median", p.random_median},
                       {"adversarial_median", p.adversarial_median},
                       {"ratio", p.ratio},
                       {"random_bound", p.random_bound},
                       {"random_timeouts", p.random_timeouts},
                       {"adversarial_timeouts", p.adversarial_timeouts},
                       {"zeta_phase_median", p.zeta_phase_median},
                       {"stall_respected", p.stall_respected}});
        std::cout << "l=" << p.l << " nodes=" << p.nodes << " random_median=" << fmt(p.random_median)
                  << " adversarial_median=" << fmt(p.adversarial_median) << " ratio=" << fmt(p.ratio) << '\n';
        ok = ok && p.ratio >= 3.0 && p.random_median <= p.random_bound;
      }
      write_outputs(sep_c, "exp-separation",
                    {"l", "mode", "trial", "broadcast_time", "zeta_root_round", "zeta_first_round", "zeta_full_round",
                     "stall_respected"},
                    rows.str(), sep_b.echo(), {{"points", pts}, {"ratio_grows", rep.ratio_grows}});
      check(ok, "separation ratio");
    } else if (*tight) {
      load_config("exp-tightness", tight_c, tight_b);
      for (std::size_t k : tight_k)
        if (k < 2) throw Error("bad-config", "k must be >= 2");
      auto rep = exp_tightness(tight_k, trials_or(tight_c, 10000), tight_c.seed);
      std::ostringstream rows;
      json pts = json::array();
      bool ok = true;
      for (const auto& p : rep.points) {
        for (std::size_t i = 0; i < p.rounds.size(); ++i) rows << p.k << ',' << i << ',' << fmt(p.rounds[i]) << '\n';
        pts.push_back({{"k", p.k},
                       {"nodes", p.nodes},
                       {"degree_ratio", p.degree_ratio},
                       {"scale", p.scale},
                       {"first_round_win", p.first_round_win},
                       {"m_star", p.m_star},
                       {"mean_rounds", p.mean_rounds},
                       {"timeouts", p.timeouts},
                       {"pull_one_round", p.pull_one_round}});
        std::cout << "k=" << p.k << " m_star=" << fmt(p.m_star) << " win=" << fmt(p.first_round_win)
                  << " pull_one_round=" << fmt(p.pull_one_round) << '\n';
        ok = ok && p.pull_one_round == 1.0;
      }
      for (const auto& a : rep.points)
        for (const auto& b : rep.points)
          if (b.k == 2 * a.k) {
            double r = b.m_star / a.m_star;
            std::cout << "ratio m*(" << b.k << ")/m*(" << a.k << ")=" << fmt(r) << '\n';
            ok = ok && r >= 1.3 && r <= 3.5;
          }
      write_outputs(tight_c, "exp-tightness", {"k", "trial", "rounds"}, rows.str(), tight_b.echo(), {{"points", pts}});
      check(ok, "tightness scaling");
    } else if (*coup) {
      load_config("exp-coupling", coup_c, coup_b);
      std::vector<SuiteCase> cases;
      if (!coup_graph.empty()) {
        Loaded l = load_graph(coup_graph, "");
        cases.push_back({coup_graph, std::move(l.graph), l.default_seeds});
      } else if (coup_suite == "small") {
        cases = small_suite();
      } else {
        throw Error("bad-config", "unknown suite '" + coup_suite + "'");
      }
      const std::uint64_t trials = trials_or(coup_c, 1000);
      std::ostringstream rows;
      json out = json::array();
      bool ok = true;
      for (const auto& sc : cases) {
        auto params = default_params(sc.graph, coup_scale);
        auto rep = estimate_violation_rate(sc.graph, sc.seeds, params, trials, coup_c.seed, true);
        for (const auto& r : rep.runs)
          rows << sc.name << ',' << r.seed << ',' << r.violated << ',' << r.bad << ',' << r.rpull.count() << ','
               << r.vpull.count() << ',' << to_string(r.cause) << '\n';
        out.push_back({{"graph", sc.name},
                       {"params", params},
                       {"violation_rate", rep.rate},
                       {"interval", {rep.interval.low, rep.interval.high}},
                       {"bad_rate", rep.bad_rate},
                       {"by_bad_execution", rep.by_bad_execution},
                       {"by_strong_final_pull", rep.by_strong_final_pull},
                       {"by_token", rep.by_token}});
        std::cout << sc.name << " violation_rate=" << fmt(rep.rate) << " bad_rate=" << fmt(rep.bad_rate) << '\n';
        ok = ok && rep.rate <= 0.01 && rep.bad_rate <= 0.01;
      }
      write_outputs(coup_c, "exp-coupling", {"graph", "seed", "violated", "BE", "rpull_size", "vpull_size", "cause"},
                    rows.str(), coup_b.echo(), {{"cases", out}});
      check(ok, "violation rate");
    } else if (*dom) {
      load_config("exp-dominance", dom_c, dom_b);
      if (dom_suite != "small") throw Error("bad-config", "unknown suite '" + dom_suite + "'");
      const std::uint64_t samples = trials_or(dom_c, 100000);
      std::ostringstream rows;
      json out = json::array();
      bool ok = true;
      for (const auto& sc : small_suite()) {
        auto rep = dominance_case(sc, samples, dom_c.seed, dom_threshold);
        rows << sc.name << ',' << rep.rounds << ',' << rep.samples << ',' << rep.test.families << ','
             << fmt(rep.test.worst_deficit) << ',' << rep.test.worst_family << ',' << rep.test.passes << '\n';
        out.push_back({{"graph", sc.name},
                       {"rounds", rep.rounds},
                       {"exact_pull", rep.exact_pull},
                       {"worst_deficit", rep.test.worst_deficit},
                       {"worst_family", rep.test.worst_family},
                       {"families", rep.test.families},
                       {"passes", rep.test.passes}});
        std::cout << sc.name << " T=" << rep.rounds << " worst_deficit=" << fmt(rep.test.worst_deficit)
                  << (rep.test.passes ? " ok" : " FAIL") << '\n';
        ok = ok && rep.test.passes;
      }
      write_outputs(dom_c, "exp-dominance",
                    {"graph", "rounds", "samples", "families", "worst_deficit", "worst_family", "passes"}, rows.str(),
                    dom_b.echo(), {{"cases", out}});
      check(ok, "monotone-set deficit");
    } else if (*ch) {
      load_config("chernoff", ch_c, ch_b);
      const std::uint64_t samples = trials_or(ch_c, 1000000);
      std::ostringstream rows;
      json out = json::array();
      bool ok = true;
      for (double t : ch_t) {
        auto b = chernoff_geo_bound(ch_p, t);
        double emp = chernoff_empirical_tail(ch_p, t, samples, ch_c.seed);
        rows << fmt(t) << ',' << fmt(b.mu) << ',' << fmt(b.threshold) << ',' << fmt(b.bound) << ',' << fmt(emp) << '\n';
        out.push_back({{"t", t}, {"mu", b.mu}, {"threshold", b.threshold}, {"bound", b.bound}, {"empirical", emp}});
        std::cout << "t=" << fmt(t) << " mu=" << fmt(b.mu) << " bound=" << fmt(b.bound) << " empirical=" << fmt(emp)
                  << '\n';
        ok = ok && emp <= b.bound;
      }
      write_outputs(ch_c, "chernoff", {"t", "mu", "threshold", "bound", "empirical"}, rows.str(), ch_b.echo(),
                    {{"p", ch_p}, {"rows", out}});
      check(ok, "empirical tail above bound");
    }
  } catch (const CheckFailure& f) {
    bool checking = (*sim && sim_c.check) || (*gen && gen_c.check) || (*tree && tree_c.check) ||
                    (*sep && sep_c.check) || (*tight && tight_c.check) || (*coup && coup_c.check) ||
                    (*dom && dom_c.check) || (*ch && ch_c.check);
    if (!checking) return kOk;
    std::cerr << "check failed: " << f.what << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
