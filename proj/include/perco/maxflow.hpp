#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace perco {

/// Dinic's algorithm over an arbitrary ordered capacity type (double or an
/// exact integer).  Residual capacities at or below `eps` count as saturated.
template <class Cap>
class MaxFlow {
 public:
  explicit MaxFlow(int nodes, Cap eps = Cap(0)) : adj_(static_cast<std::size_t>(nodes)), eps_(eps) {}

  /// Returns the arc id; flow(id) reads it back after solve().
  int add_arc(int from, int to, Cap cap) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, Cap(0)});
    arcs_.push_back({from, Cap(0), Cap(0)});
    adj_[static_cast<std::size_t>(from)].push_back(id);
    adj_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  Cap solve(int source, int sink) {
    Cap total(0);
    while (bfs(source, sink)) {
      it_.assign(adj_.size(), 0);
      while (true) {
        Cap pushed = dfs(source, sink, Cap(-1));
        if (!(pushed > eps_)) break;
        total += pushed;
      }
    }
    return total;
  }

  [[nodiscard]] const Cap& flow(int arc) const { return arcs_[static_cast<std::size_t>(arc)].flow; }

  /// Nodes reachable from `source` in the residual graph (valid after solve()).
  [[nodiscard]] std::vector<bool> source_side(int source) {
    bfs(source, -1);
    std::vector<bool> out(adj_.size());
    for (std::size_t i = 0; i < adj_.size(); ++i) out[i] = level_[i] >= 0;
    return out;
  }

 private:
  struct Arc {
    int to;
    Cap cap;
    Cap flow;
  };

  [[nodiscard]] bool residual(const Arc& a) const { return a.cap - a.flow > eps_; }

  bool bfs(int source, int sink) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int id : adj_[static_cast<std::size_t>(u)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(id)];
        if (level_[static_cast<std::size_t>(a.to)] < 0 && residual(a)) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(a.to);
        }
      }
    }
    return sink >= 0 && level_[static_cast<std::size_t>(sink)] >= 0;
  }

  // limit < 0 means unlimited.
  Cap dfs(int u, int sink, const Cap& limit) {
    if (u == sink) return limit;
    auto& i = it_[static_cast<std::size_t>(u)];
    for (; i < adj_[static_cast<std::size_t>(u)].size(); ++i) {
      const int id = adj_[static_cast<std::size_t>(u)][i];
      Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(u)] + 1 || !residual(a)) continue;
      Cap room = a.cap - a.flow;
      if (limit >= Cap(0) && limit < room) room = limit;
      Cap got = dfs(a.to, sink, room);
      if (got > eps_) {
        a.flow += got;
        arcs_[static_cast<std::size_t>(id ^ 1)].flow -= got;
        return got;
      }
    }
    return Cap(0);
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
  Cap eps_;
};

}  // namespace perco
