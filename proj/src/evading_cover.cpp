#include "atsp01/evading_cover.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace atsp01 {
namespace {

std::string arc_str(Vertex u, Vertex v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

}  // namespace

bool DirectedMatching::perfect() const {
  std::vector<char> covered(n, 0);
  for (const auto& a : arcs) covered[a.tail] = covered[a.head] = 1;
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

int DirectedMatching::weight() const {
  int w = 0;
  for (const auto& a : arcs) w += a.weight;
  return w;
}

bool DirectedMatching::contains(Vertex u, Vertex v) const {
  return std::any_of(arcs.begin(), arcs.end(),
                     [&](const Arc& a) { return a.tail == u && a.head == v; });
}

Verdict DirectedMatching::check(const Instance& inst) const {
  if (n != inst.n()) return Verdict::fail("matching vertex count differs from instance");
  std::vector<char> covered(n, 0);
  for (const auto& a : arcs) {
    if (a.tail < 0 || a.head < 0 || a.tail >= n || a.head >= n || a.tail == a.head)
      return Verdict::fail("matching arc " + arc_str(a.tail, a.head) + " is invalid");
    if (a.weight != inst.weight(a.tail, a.head))
      return Verdict::fail("matching arc " + arc_str(a.tail, a.head) + " has wrong weight");
    if (covered[a.tail] || covered[a.head])
      return Verdict::fail("matching arcs share a vertex at " + arc_str(a.tail, a.head));
    covered[a.tail] = covered[a.head] = 1;
  }
  return Verdict::pass();
}

int EvadingCover::half_units() const {
  int w = static_cast<int>(half_arcs.size());
  for (const auto& a : full_arcs) w += 2 * a.weight;
  // Half-arcs only ever split weight-1 arcs.
  return w;
}

void EvadingCover::canonicalize() {
  std::sort(full_arcs.begin(), full_arcs.end());
  std::sort(half_arcs.begin(), half_arcs.end());
}

std::vector<std::pair<Vertex, Vertex>> m_hit_pairs(const Instance& inst,
                                                   const DirectedMatching& m) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const auto& a : m.arcs) {
    if (a.weight != 1 || !inst.is_one(a.head, a.tail)) continue;
    out.emplace_back(std::min(a.tail, a.head), std::max(a.tail, a.head));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DirectedMatching compute_m_max(const Instance& inst) {
  const int n = inst.n();
  if (n % 2 != 0) throw std::invalid_argument("compute_m_max: vertex count must be even");
  UGraph support{n, {}};
  for (auto [u, v] : inst.ones())
    if (u < v || !inst.is_one(v, u)) support.edges.push_back({std::min(u, v), std::max(u, v), 1});
  const UMatching mm = max_cardinality_matching(support);

  DirectedMatching m{n, {}};
  std::vector<Vertex> single;
  for (Vertex u = 0; u < n; ++u) {
    const int w = mm.mate[u];
    if (w < 0) {
      single.push_back(u);
    } else if (u < w) {
      // Both directions weight 1: take the lexicographically smaller arc.
      if (inst.is_one(u, w))
        m.arcs.push_back({u, w, 1});
      else
        m.arcs.push_back({w, u, 1});
    }
  }
  for (std::size_t i = 0; i + 1 < single.size(); i += 2) {
    const Vertex u = single[i], v = single[i + 1];
    // Two unmatched vertices joined by a 1-arc would contradict maximality.
    if (inst.is_one(u, v) || inst.is_one(v, u))
      throw InvariantError("compute_m_max: matching is not maximum");
    m.arcs.push_back({u, v, 0});
  }
  std::sort(m.arcs.begin(), m.arcs.end());
  return m;
}

GadgetGraph build_gprime(const Instance& inst, const DirectedMatching& m) {
  const int n = inst.n();
  GadgetGraph gg;
  gg.n = n;
  const auto hits = m_hit_pairs(inst, m);
  std::set<std::pair<Vertex, Vertex>> split;
  for (auto [u, v] : hits) {
    split.emplace(u, v);
    split.emplace(v, u);
  }

  int next = 2 * n;
  std::map<std::pair<Vertex, Vertex>, int> widget_of;
  auto& edges = gg.graph.edges;
  for (auto [u, v] : inst.ones()) {
    ArcWidget w{u, v, split.count({u, v}) > 0, next, next + 1};
    next += 2;
    widget_of[{u, v}] = static_cast<int>(gg.widgets.size());
    edges.push_back({GadgetGraph::out_node(u), w.e1, 1});
    edges.push_back({w.e1, w.e2, 0});
    edges.push_back({GadgetGraph::in_node(v), w.e2, 1});
    gg.widgets.push_back(w);
  }
  for (auto [u, v] : hits) {
    const auto& uv = gg.widgets[widget_of.at({u, v})];
    const auto& vu = gg.widgets[widget_of.at({v, u})];
    HitGadget g{u, v, next, next + 1};
    next += 2;
    edges.push_back({g.a, uv.e1, 0});
    edges.push_back({g.a, vu.e2, 0});
    edges.push_back({g.b, vu.e1, 0});
    edges.push_back({g.b, uv.e2, 0});
    gg.gadgets.push_back(g);
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && !inst.is_one(u, v)) {
        edges.push_back({GadgetGraph::out_node(u), GadgetGraph::in_node(v), 0});
        ++gg.zero_edges;
      }
  gg.graph.n = next;
  return gg;
}

EvadingCover extract_cover(const GadgetGraph& gg, const UMatching& pm, const Instance& inst,
                           const DirectedMatching& m) {
  if (static_cast<int>(pm.mate.size()) != gg.graph.n || !pm.perfect())
    throw InvariantError("extract_cover: matching is not perfect on G'");
  EvadingCover c{gg.n, {}, {}};
  for (const auto& w : gg.widgets) {
    const bool tail_taken = pm.mate[GadgetGraph::out_node(w.tail)] == w.e1;
    const bool head_taken = pm.mate[GadgetGraph::in_node(w.head)] == w.e2;
    const Arc base{w.tail, w.head, 1};
    if (tail_taken && head_taken) {
      c.full_arcs.push_back(base);
    } else if (tail_taken || head_taken) {
      if (!w.split)
        throw InvariantError("extract_cover: unsplit arc " + arc_str(w.tail, w.head) +
                             " decoded as a half-arc");
      c.half_arcs.push_back({base, tail_taken ? HalfPart::Tail : HalfPart::Head});
    }
  }
  for (Vertex u = 0; u < gg.n; ++u) {
    const int partner = pm.mate[GadgetGraph::out_node(u)];
    if (partner < 2 * gg.n && partner % 2 == 1) c.full_arcs.push_back({u, partner / 2, 0});
  }
  c.canonicalize();
  if (auto v = verify_evading(c, inst, m); !v)
    throw InvariantError("extract_cover: decoded cover is invalid: " + v.reason);
  return c;
}

Verdict verify_evading(const EvadingCover& c, const Instance& inst, const DirectedMatching& m) {
  const int n = inst.n();
  if (c.n != n) return Verdict::fail("cover vertex count differs from instance");
  std::set<std::pair<Vertex, Vertex>> split;
  for (auto [u, v] : m_hit_pairs(inst, m)) {
    split.emplace(u, v);
    split.emplace(v, u);
  }
  auto in_range = [n](const Arc& a) {
    return a.tail >= 0 && a.head >= 0 && a.tail < n && a.head < n && a.tail != a.head;
  };

  std::vector<int> outdeg(n, 0), indeg(n, 0);
  // halves[(u,v)] = {tail half present, head half present}; full arcs count as both.
  std::map<std::pair<Vertex, Vertex>, std::pair<int, int>> halves;
  std::set<std::pair<Vertex, Vertex>> seen_full;
  for (const auto& a : c.full_arcs) {
    if (!in_range(a)) return Verdict::fail("invalid arc " + arc_str(a.tail, a.head));
    if (a.weight != inst.weight(a.tail, a.head))
      return Verdict::fail("arc " + arc_str(a.tail, a.head) + " has wrong weight");
    if (!seen_full.emplace(a.tail, a.head).second)
      return Verdict::fail("duplicate arc " + arc_str(a.tail, a.head));
    ++outdeg[a.tail];
    ++indeg[a.head];
    if (split.count({a.tail, a.head})) {
      auto& h = halves[{a.tail, a.head}];
      ++h.first;
      ++h.second;
    }
  }
  for (const auto& h : c.half_arcs) {
    const Arc& a = h.base;
    if (!in_range(a) || !split.count({a.tail, a.head}))
      return Verdict::fail("half-arc of unsplit arc " + arc_str(a.tail, a.head));
    auto& cnt = halves[{a.tail, a.head}];
    if (h.part == HalfPart::Tail) {
      ++outdeg[a.tail];
      ++cnt.first;
    } else {
      ++indeg[a.head];
      ++cnt.second;
    }
    if (cnt.first > 1 || cnt.second > 1)
      return Verdict::fail("half-arc of " + arc_str(a.tail, a.head) + " used twice");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (outdeg[v] != 1)
      return Verdict::fail("(i) vertex " + std::to_string(v) + " has " +
                           std::to_string(outdeg[v]) + " outgoing elements");
    if (indeg[v] != 1)
      return Verdict::fail("(i) vertex " + std::to_string(v) + " has " +
                           std::to_string(indeg[v]) + " incoming elements");
  }
  for (auto [u, v] : m_hit_pairs(inst, m)) {
    const auto uv = halves.count({u, v}) ? halves[{u, v}] : std::pair<int, int>{0, 0};
    const auto vu = halves.count({v, u}) ? halves[{v, u}] : std::pair<int, int>{0, 0};
    const int total = uv.first + uv.second + vu.first + vu.second;
    const std::string pair = "{" + std::to_string(u) + "," + std::to_string(v) + "}";
    if (total != 0 && total != 2)
      return Verdict::fail("(ii) 2-cycle " + pair + " uses " + std::to_string(total) +
                           " half-edges");
    const bool lone_uv = uv.first + uv.second == 1;
    const bool lone_vu = vu.first + vu.second == 1;
    if (lone_uv != lone_vu)
      return Verdict::fail("(ii) 2-cycle " + pair + " has an unpaired half-edge");
    if (lone_uv) {
      // Half of (u,v) sits at u iff it is the tail half; the partner must sit at v.
      const Vertex at_uv = uv.first ? u : v;
      const Vertex at_vu = vu.first ? v : u;
      if (at_uv == at_vu)
        return Verdict::fail("(ii) 2-cycle " + pair + " has both half-edges at one vertex");
    }
  }
  return Verdict::pass();
}

EvadingCover max_evading_cover(const Instance& inst, const DirectedMatching& m) {
  const GadgetGraph gg = build_gprime(inst, m);
  const auto pm = max_weight_perfect_matching(gg.graph);
  if (!pm) throw InvariantError("max_evading_cover: G' has no perfect matching");
  return extract_cover(gg, *pm, inst, m);
}

}  // namespace atsp01
