#include "atsp01/multigraph_assembly.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace atsp01 {

int WholeCover::weight() const {
  int w = 0;
  for (const auto& a : arcs) w += a.weight;
  for (const auto& a : from_half_pairs) w += a.weight;
  return w;
}

WholeCover replace_half_arc_pairs(const EvadingCover& c, const DirectedMatching& m) {
  WholeCover out;
  out.arcs = c.full_arcs;
  std::map<std::pair<Vertex, Vertex>, int> per_pair;
  for (const auto& h : c.half_arcs)
    ++per_pair[{std::min(h.base.tail, h.base.head), std::max(h.base.tail, h.base.head)}];
  for (auto [pair, count] : per_pair) {
    auto [u, v] = pair;
    if (count != 2)
      throw InvariantError("replace_half_arc_pairs: pair {" + std::to_string(u) + "," +
                           std::to_string(v) + "} has " + std::to_string(count) + " half-arcs");
    if (m.contains(v, u))
      out.from_half_pairs.push_back({u, v, 1});
    else
      out.from_half_pairs.push_back({v, u, 1});
  }
  return out;
}

Verdict check_gm_invariants(const Multigraph& g) {
  std::vector<int> indeg(g.n, 0), outdeg(g.n, 0);
  std::map<std::pair<Vertex, Vertex>, int> ones_per_pair;
  for (const auto& a : g.arcs) {
    ++outdeg[a.tail];
    ++indeg[a.head];
    if (a.weight == 1) ++ones_per_pair[{std::min(a.tail, a.head), std::max(a.tail, a.head)}];
  }
  for (Vertex v = 0; v < g.n; ++v) {
    if (indeg[v] + outdeg[v] != 3)
      return Verdict::fail("vertex " + std::to_string(v) + " has degree " +
                           std::to_string(indeg[v] + outdeg[v]));
    if (indeg[v] > 2 || outdeg[v] > 2)
      return Verdict::fail("vertex " + std::to_string(v) + " has in/out degree above two");
  }
  for (auto [pair, count] : ones_per_pair)
    if (count > 2)
      return Verdict::fail("pair {" + std::to_string(pair.first) + "," +
                           std::to_string(pair.second) + "} carries " + std::to_string(count) +
                           " weight-1 arcs");
  return Verdict::pass();
}

AssembledMultigraph build_gm(const DirectedMatching& m, const WholeCover& c) {
  AssembledMultigraph gm;
  gm.graph.n = m.n;
  for (const auto& a : m.arcs) gm.graph.arcs.push_back({a.tail, a.head, a.weight, Origin::Matching});
  for (const auto& a : c.arcs) gm.graph.arcs.push_back({a.tail, a.head, a.weight, Origin::Cover});
  for (const auto& a : c.from_half_pairs) {
    gm.graph.arcs.push_back({a.tail, a.head, a.weight, Origin::HalfPair});
    gm.half_pair_cycles.emplace_back(std::min(a.tail, a.head), std::max(a.tail, a.head));
  }
  if (auto v = check_gm_invariants(gm.graph); !v) throw InvariantError("build_gm: " + v.reason);
  return gm;
}

}  // namespace atsp01
