#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace rumorlab {

/// Dinic's max-flow over an arbitrary ordered ring of capacities (machine
/// integers or big integers).
template <typename Cap>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), next_(nodes) {}

  /// Returns the id of the forward edge.
  std::size_t add_edge(std::size_t from, std::size_t to, const Cap& cap) {
    adj_[from].push_back(edges_.size());
    edges_.push_back({to, cap, Cap(0)});
    adj_[to].push_back(edges_.size());
    edges_.push_back({from, Cap(0), Cap(0)});
    return edges_.size() - 2;
  }

  Cap run(std::size_t source, std::size_t sink) {
    Cap total(0);
    while (bfs(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        Cap pushed = dfs(source, sink, Cap(-1));
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  const Cap& flow(std::size_t edge) const { return edges_[edge].flow; }

 private:
  struct Arc {
    std::size_t to;
    Cap cap;
    Cap flow;
  };

  Cap residual(const Arc& a) const { return a.cap - a.flow; }

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{s};
    level_[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t v = queue[head];
      for (std::size_t id : adj_[v]) {
        const Arc& a = edges_[id];
        if (level_[a.to] < 0 && residual(a) > 0) {
          level_[a.to] = level_[v] + 1;
          queue.push_back(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unbounded.
  Cap dfs(std::size_t v, std::size_t t, const Cap& limit) {
    if (v == t) return limit;
    for (; next_[v] < adj_[v].size(); ++next_[v]) {
      std::size_t id = adj_[v][next_[v]];
      Arc& a = edges_[id];
      if (level_[a.to] != level_[v] + 1 || residual(a) <= 0) continue;
      Cap room = residual(a);
      Cap want = limit < 0 ? room : std::min(limit, room);
      Cap got = dfs(a.to, t, want);
      if (got > 0) {
        a.flow += got;
        edges_[id ^ 1].flow -= got;
        return got;
      }
    }
    return Cap(0);
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace rumorlab
