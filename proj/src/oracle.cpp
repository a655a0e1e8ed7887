#include "atsp01/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace atsp01 {
namespace {

// Held-Karp over (visited set, last vertex) with vertex 0 fixed as the start.
// better(a, b) says whether a beats b.
template <typename ArcValue, typename Better>
TourOracle held_karp(int n, ArcValue value, Better better, int worst) {
  if (n > kHeldKarpMaxN) throw std::invalid_argument("held_karp: n too large");
  if (n < 2) throw std::invalid_argument("held_karp: n must be at least 2");
  const std::uint32_t full = (1u << n) - 1;
  const int unset = worst;
  std::vector<int> dp(static_cast<std::size_t>(1u << n) * n, unset);
  std::vector<signed char> prev(dp.size(), -1);
  auto at = [n](std::uint32_t mask, int v) { return static_cast<std::size_t>(mask) * n + v; };
  dp[at(1, 0)] = 0;
  TourOracle r;
  for (std::uint32_t mask = 1; mask <= full; mask += 2) {
    for (int last = 0; last < n; ++last) {
      const int cur = dp[at(mask, last)];
      if (cur == unset || !(mask >> last & 1)) continue;
      for (int nxt = 1; nxt < n; ++nxt) {
        if (mask >> nxt & 1) continue;
        ++r.explored;
        const int cand = cur + value(last, nxt);
        auto& slot = dp[at(mask | 1u << nxt, nxt)];
        if (slot == unset || better(cand, slot)) {
          slot = cand;
          prev[at(mask | 1u << nxt, nxt)] = static_cast<signed char>(last);
        }
      }
    }
  }
  int best_last = -1;
  for (int last = 1; last < n; ++last) {
    const int cand = dp[at(full, last)] + value(last, 0);
    if (best_last == -1 || better(cand, r.value)) {
      r.value = cand;
      best_last = last;
    }
  }
  std::uint32_t mask = full;
  for (int v = best_last; v != 0;) {
    r.tour.push_back(v);
    const int p = prev[at(mask, v)];
    mask &= ~(1u << v);
    v = p;
  }
  r.tour.push_back(0);
  std::reverse(r.tour.begin(), r.tour.end());
  return r;
}

}  // namespace

TourOracle held_karp_max(const Instance& inst) {
  return held_karp(
      inst.n(), [&](int u, int v) { return inst.weight(u, v); },
      [](int a, int b) { return a > b; }, std::numeric_limits<int>::min());
}

TourOracle held_karp_min12(const Instance& costs) {
  return held_karp(
      costs.n(), [&](int u, int v) { return costs.is_one(u, v) ? 1 : 2; },
      [](int a, int b) { return a < b; }, std::numeric_limits<int>::max());
}

int enumerate_tours_max(const Instance& inst) {
  const int n = inst.n();
  if (n > 10) throw std::invalid_argument("enumerate_tours_max: n too large");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = 0;
  do {
    best = std::max(best, tour_weight(inst, order));
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

// Enumerates every structure allowed by the evading-cover definition. Each
// hit pair {u,v} is in one of three states: arcs used whole (at most one of
// the two directions), both tail halves (u and v gain an outgoing half), or
// both head halves (u and v gain an incoming half). Any other legal half-edge
// combination of a pair is the same arc set as a whole arc. The remaining
// out/in slots are filled by an exhaustive search over successor choices.
CoverOracle brute_evading_cover(const Instance& inst, const DirectedMatching& m) {
  const int n = inst.n();
  if (n > kBruteCoverMaxN) throw std::invalid_argument("brute_evading_cover: n too large");
  const auto hits = m_hit_pairs(inst, m);
  const int h = static_cast<int>(hits.size());
  std::vector<std::vector<int>> hit_id(n, std::vector<int>(n, -1));
  for (int i = 0; i < h; ++i) {
    hit_id[hits[i].first][hits[i].second] = i;
    hit_id[hits[i].second][hits[i].first] = i;
  }

  CoverOracle best;
  best.half_units = -1;
  std::vector<int> state(h, 0);
  std::vector<char> out_blocked(n), in_used(n);
  std::vector<Vertex> succ(n, -1);

  std::function<void(int, int, int)> assign = [&](Vertex u, int units, int free_outs) {
    while (u < n && out_blocked[u]) ++u;
    if (u == n) {
      ++best.explored;
      if (units > best.half_units) {
        best.half_units = units;
        EvadingCover c{n, {}, {}};
        for (Vertex v = 0; v < n; ++v)
          if (succ[v] >= 0) c.full_arcs.push_back({v, succ[v], inst.weight(v, succ[v])});
        for (int i = 0; i < h; ++i) {
          auto [a, b] = hits[i];
          if (state[i] == 1) {
            c.half_arcs.push_back({{a, b, 1}, HalfPart::Tail});
            c.half_arcs.push_back({{b, a, 1}, HalfPart::Tail});
          } else if (state[i] == 2) {
            c.half_arcs.push_back({{a, b, 1}, HalfPart::Head});
            c.half_arcs.push_back({{b, a, 1}, HalfPart::Head});
          }
        }
        c.canonicalize();
        best.witness = std::move(c);
      }
      return;
    }
    if (units + 2 * free_outs <= best.half_units) return;
    for (Vertex v = 0; v < n; ++v) {
      if (v == u || in_used[v]) continue;
      const int id = hit_id[u][v];
      if (id >= 0 && state[id] == 0 && succ[v] == u) continue;  // whole M-hit 2-cycle
      in_used[v] = 1;
      succ[u] = v;
      assign(u + 1, units + 2 * inst.weight(u, v), free_outs - 1);
      succ[u] = -1;
      in_used[v] = 0;
    }
  };

  std::function<void(int)> choose_states = [&](int i) {
    if (i == h) {
      std::fill(out_blocked.begin(), out_blocked.end(), 0);
      std::fill(in_used.begin(), in_used.end(), 0);
      int tails = 0, heads = 0;
      for (int j = 0; j < h; ++j) {
        auto [a, b] = hits[j];
        if (state[j] == 1) {
          out_blocked[a] = out_blocked[b] = 1;
          ++tails;
        } else if (state[j] == 2) {
          in_used[a] = in_used[b] = 1;
          ++heads;
        }
      }
      if (tails != heads) return;  // out and in slot counts must agree
      assign(0, 2 * (tails + heads), n - 2 * tails);
      return;
    }
    for (int s = 0; s < 3; ++s) {
      state[i] = s;
      choose_states(i + 1);
    }
    state[i] = 0;
  };
  choose_states(0);
  if (best.half_units < 0) best.half_units = 0;  // n = 2 with a hit pair has no cover
  return best;
}

namespace {

// Union-find with undo; no path compression so unions can be rolled back.
class UndoUnionFind {
 public:
  explicit UndoUnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
  }
  void undo() {
    const int b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> history_;
};

}  // namespace

std::optional<Coloring> brute_path2color(const Multigraph& g, int max_arcs) {
  const int k = static_cast<int>(g.arcs.size());
  if (k > max_arcs) throw std::invalid_argument("brute_path2color: too many arcs");
  const int n = g.n;
  // Per color: out/in usage and a union-find over vertices. A class of
  // vertex-disjoint paths gains a cycle exactly when an arc joins two
  // vertices already in one of its components.
  std::vector<std::vector<char>> out_used(3, std::vector<char>(n)), in_used(3, std::vector<char>(n));
  std::vector<UndoUnionFind> uf(3, UndoUnionFind(n));
  Coloring col(k, 0);
  std::function<bool(int)> rec = [&](int i) {
    if (i == k) return true;
    const auto& a = g.arcs[i];
    for (int c = 1; c <= 2; ++c) {
      if (out_used[c][a.tail] || in_used[c][a.head]) continue;
      if (uf[c].find(a.tail) == uf[c].find(a.head)) continue;
      out_used[c][a.tail] = in_used[c][a.head] = 1;
      uf[c].unite(a.tail, a.head);
      col[i] = c;
      if (rec(i + 1)) return true;
      uf[c].undo();
      out_used[c][a.tail] = in_used[c][a.head] = 0;
    }
    col[i] = 0;
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return col;
}

}  // namespace atsp01
