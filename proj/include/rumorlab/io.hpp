#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rumorlab/error.hpp"
#include "rumorlab/generators.hpp"
#include "rumorlab/graph.hpp"
#include "rumorlab/protocol.hpp"

namespace rumorlab {

inline constexpr const char* kCsvSchemaVersion = "rumorlab-csv/1";

/// "# nodes N" followed by one "u v" line per edge, u < v, lexicographic.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.node_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

/// Reads the format above. Without a "# nodes" header the node count is one
/// more than the largest id. Other '#' lines are comments.
inline Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared = 0;
  bool has_header = false;
  std::size_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string word;
      if (hs >> word && word == "nodes") {
        if (!(hs >> declared)) throw Error("bad-graph", "malformed node header on line " + std::to_string(lineno));
        has_header = true;
      }
      continue;
    }
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0)
      throw Error("bad-graph", "malformed edge on line " + std::to_string(lineno));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(u, v)));
  }
  std::size_t n = has_header ? declared : (edges.empty() ? 1 : max_id + 1);
  return Graph::from_edges(n, edges);
}

inline nlohmann::json layout_json(const LctLayout& l) {
  return {{"kind", "lct"}, {"k", l.k}, {"root", l.root}, {"branch_nodes", l.branch_nodes}, {"leaf_nodes", l.leaf_nodes}};
}

inline nlohmann::json layout_json(const SeparationLayout& s) {
  nlohmann::json copies = nlohmann::json::array();
  for (const auto& c : s.copies) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : c.parts) parts.push_back(layout_json(p));
    copies.push_back({{"r", c.r},
                      {"r_alpha", c.r_alpha()},
                      {"r_zeta", c.r_zeta()},
                      {"alpha", layout_json(c.alpha)},
                      {"zeta", layout_json(c.zeta)},
                      {"parts", parts},
                      {"c_alpha", c.c_alpha}});
  }
  return {{"kind", "separation"}, {"l", s.l},         {"c", s.c},         {"m", s.m},
          {"n_big", s.n_big},     {"log_n", s.log_n}, {"doubled", s.doubled}, {"copies", copies}};
}

inline nlohmann::json layout_json(const TightnessLayout& t) {
  return {{"kind", "tightness"}, {"k", t.k},           {"A", t.a},
          {"B", t.b},            {"cliques_per_b", t.cliques_per_b}, {"cliques", t.cliques},
          {"bridges", t.bridges}};
}

inline void write_csv_preamble(std::ostream& out, const std::string& experiment, const std::vector<std::string>& columns) {
  out << "# " << kCsvSchemaVersion << ' ' << experiment << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

/// Rows (run_id, t, |S_t|, new_count).
inline void write_trace_csv(std::ostream& out, const std::string& run_id, const std::vector<RoundSummary>& rows) {
  for (const auto& r : rows) out << run_id << ',' << r.round << ',' << r.informed << ',' << r.new_count << '\n';
}

}  // namespace rumorlab
