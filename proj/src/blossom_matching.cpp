#include "atsp01/blossom_matching.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace atsp01 {

void UGraph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop at " + std::to_string(e.u));
    if (e.weight < 0) throw std::invalid_argument("negative edge weight");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw std::invalid_argument("parallel edge {" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + "}");
  }
}

int UMatching::size() const {
  return static_cast<int>(std::count_if(mate.begin(), mate.end(), [](int m) { return m >= 0; })) /
         2;
}

bool UMatching::perfect() const {
  return std::all_of(mate.begin(), mate.end(), [](int m) { return m >= 0; });
}

std::int64_t UMatching::weight(const UGraph& g) const {
  std::int64_t w = 0;
  for (const auto& e : g.edges)
    if (mate[e.u] == e.v) w += e.weight;
  return w;
}

bool UMatching::valid_for(const UGraph& g) const {
  if (static_cast<int>(mate.size()) != g.n) return false;
  std::set<std::pair<int, int>> edges;
  for (const auto& e : g.edges) edges.emplace(std::min(e.u, e.v), std::max(e.u, e.v));
  for (int v = 0; v < g.n; ++v) {
    const int w = mate[v];
    if (w < 0) continue;
    if (w >= g.n || mate[w] != v) return false;
    if (!edges.count({std::min(v, w), std::max(v, w)})) return false;
  }
  return true;
}

// Edmonds' algorithm with explicit blossom contraction via base pointers.
// Each phase grows an alternating forest from one free vertex; a phase that
// finds no augmenting path leaves that vertex permanently unmatched.
UMatching max_cardinality_matching(const UGraph& g) {
  g.validate();
  const int n = g.n;
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<int> mate(n, -1), parent(n), base(n);
  std::vector<char> used(n), blossom(n);

  auto lca = [&](int a, int b) {
    std::vector<char> seen(n, 0);
    for (;;) {
      a = base[a];
      seen[a] = 1;
      if (mate[a] == -1) break;
      a = parent[mate[a]];
    }
    for (;;) {
      b = base[b];
      if (seen[b]) return b;
      b = parent[mate[b]];
    }
  };
  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = blossom[base[mate[v]]] = 1;
      parent[v] = child;
      child = mate[v];
      v = parent[mate[v]];
    }
  };
  auto find_path = [&](int root) {
    std::fill(used.begin(), used.end(), 0);
    std::fill(parent.begin(), parent.end(), -1);
    for (int i = 0; i < n; ++i) base[i] = i;
    used[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int to : adj[v]) {
        if (base[v] == base[to] || mate[v] == to) continue;
        if (to == root || (mate[to] != -1 && parent[mate[to]] != -1)) {
          const int cur = lca(v, to);
          std::fill(blossom.begin(), blossom.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n; ++i) {
            if (blossom[base[i]]) {
              base[i] = cur;
              if (!used[i]) {
                used[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent[to] == -1) {
          parent[to] = v;
          if (mate[to] == -1) return to;
          used[mate[to]] = 1;
          q.push(mate[to]);
        }
      }
    }
    return -1;
  };

  for (int root = 0; root < n; ++root) {
    if (mate[root] != -1) continue;
    int v = find_path(root);
    while (v != -1) {
      const int pv = parent[v];
      const int ppv = mate[pv];
      mate[v] = pv;
      mate[pv] = v;
      v = ppv;
    }
  }
  return UMatching{std::move(mate)};
}

}  // namespace atsp01
