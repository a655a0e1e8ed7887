#include "atsp01/path2color.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <functional>
#include <string>

namespace atsp01 {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InvariantError("path2color: " + what); }

std::pair<Vertex, Vertex> unordered(Vertex a, Vertex b) { return {std::min(a, b), std::max(a, b)}; }

// Cycles and maximal directed paths of the arcs picked by keep. Every vertex
// must carry at most two picked arcs.
template <class Keep>
std::vector<CoverComponent> decompose(const Skeleton& s, Keep keep) {
  std::vector<std::vector<int>> out(s.n), in(s.n);
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
    if (!keep(a)) continue;
    out[s.tail(a)].push_back(a);
    in[s.head(a)].push_back(a);
  }
  for (Vertex v = 0; v < s.n; ++v)
    if (out[v].size() + in[v].size() > 2) fail("vertex " + std::to_string(v) + " has three cover arcs");

  std::vector<char> used(s.arcs.size(), 0);
  std::vector<CoverComponent> comps;
  auto walk = [&](int first, bool cycle) {
    CoverComponent c;
    c.is_cycle = cycle;
    c.vertices.push_back(s.tail(first));
    int a = first;
    while (true) {
      used[a] = 1;
      c.arcs.push_back(a);
      Vertex h = s.head(a);
      if (cycle && h == c.vertices.front()) break;
      c.vertices.push_back(h);
      if (in[h].size() != 1 || out[h].size() != 1) break;
      a = out[h].front();
      if (used[a]) break;
    }
    comps.push_back(std::move(c));
  };
  for (Vertex v = 0; v < s.n; ++v)
    if (in[v].size() != 1)
      for (int a : out[v]) walk(a, false);
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
    if (keep(a) && !used[a]) walk(a, true);
  return comps;
}

}  // namespace

Skeleton::Skeleton(const AssembledMultigraph& gm) : n(gm.graph.n), rep(gm.graph.n) {
  std::iota(rep.begin(), rep.end(), 0);
  for (const auto& a : gm.graph.arcs) {
    WorkArc w;
    w.tail = a.tail;
    w.head = a.head;
    w.weight = a.weight;
    w.origin = a.origin;
    arcs.push_back(w);
  }
  stats.gm_ones = gm.weight_one_count();
}

int Skeleton::active_ones() const {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(),
                                        [](const WorkArc& a) { return a.alive && a.weight == 1; }));
}

std::vector<int> Skeleton::outdeg() const {
  std::vector<int> d(n, 0);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
    if (arcs[a].active()) ++d[tail(a)];
  return d;
}

std::vector<int> Skeleton::indeg() const {
  std::vector<int> d(n, 0);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
    if (arcs[a].active()) ++d[head(a)];
  return d;
}

std::vector<std::vector<int>> Skeleton::membership() const {
  std::vector<std::vector<int>> m(n);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (Vertex v : comps[c].vertices)
      if (std::find(m[v].begin(), m[v].end(), c) == m[v].end()) m[v].push_back(c);
  return m;
}

Role Skeleton::role_for(int comp, int a) const {
  const auto& c = comps[comp];
  const auto& w = arcs[a];
  if (w.is_cover()) {
    if (std::find(c.arcs.begin(), c.arcs.end(), a) != c.arcs.end()) return Role::CoverArc;
  } else {
    for (int e : c.arcs) {
      if (w.origin == Origin::Copy && w.copy_of == e) return Role::Ichord;
      if (w.origin == Origin::Matching && tail(a) == tail(e) && head(a) == head(e))
        return Role::Ichord;
    }
  }
  auto on = [&](Vertex v) {
    return std::find(c.vertices.begin(), c.vertices.end(), v) != c.vertices.end();
  };
  bool t = on(tail(a)), h = on(head(a));
  if (t && h) return w.is_cover() ? Role::Loose : Role::Chord;
  if (w.is_cover()) return Role::Loose;
  if (h) return Role::Inray;
  if (t) return Role::Outray;
  return Role::Loose;
}

namespace {

std::vector<int> arcs_with_role(const Skeleton& s, int comp, bool (*want)(Role)) {
  std::vector<int> r;
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
    if (s.arcs[a].active() && want(s.role_for(comp, a))) r.push_back(a);
  return r;
}

}  // namespace

std::vector<int> Skeleton::rays_of(int comp) const {
  return arcs_with_role(*this, comp, [](Role r) { return r == Role::Inray || r == Role::Outray; });
}

std::vector<int> Skeleton::chords_of(int comp) const {
  return arcs_with_role(*this, comp, [](Role r) { return r == Role::Chord; });
}

std::vector<int> Skeleton::ichords_of(int comp) const {
  return arcs_with_role(*this, comp, [](Role r) { return r == Role::Ichord; });
}

Multigraph Skeleton::current_graph(std::vector<int>* arc_ids) const {
  Multigraph g;
  g.n = n;
  if (arc_ids) arc_ids->clear();
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    if (!arcs[a].active() || arcs[a].weight != 1) continue;
    g.arcs.push_back({tail(a), head(a), 1, arcs[a].origin});
    if (arc_ids) arc_ids->push_back(a);
  }
  return g;
}

void decompose_cover(Skeleton& s) {
  s.comps = decompose(s, [&](int a) {
    const auto& w = s.arcs[a];
    return w.active() && w.weight == 1 && w.is_cover();
  });
  s.kept_ray.assign(s.comps.size(), -1);
}

void duplicate_opposite_matching_arcs(Skeleton& s) {
  // Cover cycles and paths as they stand before 0-arcs are discarded.
  auto comps = decompose(s, [&](int a) { return s.arcs[a].active() && s.arcs[a].is_cover(); });
  for (const auto& c : comps) {
    for (std::size_t i = 0; i < c.arcs.size(); ++i) {
      if (!c.is_cycle && (i == 0 || i + 1 == c.arcs.size())) continue;
      int e = c.arcs[i];
      if (s.arcs[e].weight != 1) continue;
      for (auto& w : s.arcs) {
        if (w.origin != Origin::Matching || w.weight != 1 || !w.active()) continue;
        if (w.tail != s.arcs[e].head || w.head != s.arcs[e].tail) continue;
        w.tail = s.arcs[e].tail;
        w.head = s.arcs[e].head;
        w.origin = Origin::Copy;
        w.copy_of = e;
        ++s.stats.duplicated;
      }
    }
  }
  s.stats.after_duplicate = s.active_ones();
}

void strip_zero_arcs(Skeleton& s) {
  for (auto& w : s.arcs)
    if (w.weight != 1) w.alive = false;
  decompose_cover(s);
  s.stats.after_strip = s.active_ones();
}

void shrink_two_cycles(Skeleton& s) {
  std::vector<ShrinkRecord> found;
  auto external = [&](Vertex x, int skip_a, int skip_b, bool want_in) {
    for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
      if (a == skip_a || a == skip_b || !s.arcs[a].active() || s.arcs[a].is_cover()) continue;
      if (want_in ? s.head(a) == x : s.tail(a) == x) return true;
    }
    return false;
  };
  for (const auto& c : s.comps) {
    if (!c.is_cycle || c.arcs.size() != 2) continue;
    ShrinkRecord r;
    r.arc_a = c.arcs[0];
    r.arc_b = c.arcs[1];
    Vertex a = s.tail(r.arc_a), b = s.head(r.arc_a);
    r.u = std::min(a, b);
    r.v = std::max(a, b);
    // An inray at x and an outray at y: (y,x) becomes a second copy of (x,y).
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      if (!external(x, r.arc_a, r.arc_b, true) || !external(y, r.arc_a, r.arc_b, false)) continue;
      int keep = s.tail(r.arc_a) == x ? r.arc_a : r.arc_b;
      int turn = keep == r.arc_a ? r.arc_b : r.arc_a;
      auto& w = s.arcs[turn];
      w.tail = s.arcs[keep].tail;
      w.head = s.arcs[keep].head;
      w.origin = Origin::Copy;
      w.copy_of = keep;
      r.preflipped = true;
      break;
    }
    found.push_back(r);
  }
  for (int h = 0; h < static_cast<int>(s.arcs.size()); ++h) {
    const auto& w = s.arcs[h];
    if (!w.active() || w.origin != Origin::HalfPair) continue;
    int partner = -1;
    for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
      if (s.arcs[a].active() && s.arcs[a].origin == Origin::Matching && s.tail(a) == s.head(h) &&
          s.head(a) == s.tail(h))
        partner = a;
    if (partner < 0) fail("half-pair arc " + std::to_string(h) + " lost its matching partner");
    ShrinkRecord r;
    r.arc_a = h;
    r.arc_b = partner;
    r.u = std::min(s.tail(h), s.head(h));
    r.v = std::max(s.tail(h), s.head(h));
    r.from_half_pair = true;
    found.push_back(r);
  }
  for (const auto& r : found) {
    if (s.rep[r.u] != r.u || s.rep[r.v] != r.v) fail("2-cycles share a vertex");
    s.rep[r.v] = r.u;
    const int id = static_cast<int>(s.shrinks.size());
    s.arcs[r.arc_a].internal = id;
    s.arcs[r.arc_b].internal = id;
    s.shrinks.push_back(r);
  }
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
    if (s.arcs[a].active() && s.tail(a) == s.head(a))
      fail("arc " + std::to_string(a) + " became a loop after shrinking");
  decompose_cover(s);
  s.stats.shrinks = static_cast<int>(s.shrinks.size());
  s.stats.after_shrink = s.active_ones();
}

namespace {

bool is_path_endpoint(const Skeleton& s, Vertex v, int except) {
  for (int c = 0; c < static_cast<int>(s.comps.size()); ++c) {
    if (c == except || s.comps[c].is_cycle) continue;
    if (s.comps[c].vertices.front() == v || s.comps[c].vertices.back() == v) return true;
  }
  return false;
}

// Turns every arc in flips into a copy of an arc of comp, lowest ids first.
// Leaves s untouched and returns false when some arc finds no slot.
bool place_flips(Skeleton& s, int comp, std::vector<int> flips) {
  if (flips.empty()) return true;
  std::sort(flips.begin(), flips.end());
  std::vector<char> pending(s.arcs.size(), 0);
  for (int f : flips) pending[f] = 1;
  // Degrees are bounded on shrunk vertices and on the original ones inside.
  std::vector<int> out(s.n, 0), in(s.n, 0), orig_out(s.n, 0), orig_in(s.n, 0);
  std::map<std::pair<Vertex, Vertex>, int> mult;
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
    if (!s.arcs[a].alive || pending[a]) continue;
    ++orig_out[s.arcs[a].tail];
    ++orig_in[s.arcs[a].head];
    if (!s.arcs[a].active()) continue;
    ++out[s.tail(a)];
    ++in[s.head(a)];
    ++mult[unordered(s.tail(a), s.head(a))];
  }
  std::vector<int> slots = s.comps[comp].arcs;
  std::sort(slots.begin(), slots.end());
  std::vector<std::pair<int, int>> plan;
  for (int f : flips) {
    int chosen = -1;
    for (int e : slots) {
      Vertex t = s.tail(e), h = s.head(e);
      Vertex ot = s.arcs[e].tail, oh = s.arcs[e].head;
      if (out[t] < 2 && in[h] < 2 && orig_out[ot] < 2 && orig_in[oh] < 2 &&
          mult[unordered(t, h)] < 2) {
        chosen = e;
        ++out[t];
        ++in[h];
        ++orig_out[ot];
        ++orig_in[oh];
        ++mult[unordered(t, h)];
        break;
      }
    }
    if (chosen < 0) return false;
    plan.push_back({f, chosen});
  }
  for (auto [f, e] : plan) {
    auto& w = s.arcs[f];
    w.tail = s.arcs[e].tail;
    w.head = s.arcs[e].head;
    w.origin = Origin::Copy;
    w.copy_of = e;
  }
  return true;
}

std::vector<int> merged(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<int> without(std::vector<int> a, const std::vector<int>& drop) {
  std::erase_if(a, [&](int x) { return std::find(drop.begin(), drop.end(), x) != drop.end(); });
  return a;
}

}  // namespace

PathClass classify_path(const Skeleton& s, int comp) {
  const auto& c = s.comps[comp];
  PathClass pc;
  const Vertex first = c.vertices.front(), last = c.vertices.back();
  for (Vertex end : {first, last}) {
    if (!is_path_endpoint(s, end, comp)) {
      pc.border_vertices.push_back(end);
      continue;
    }
    ++pc.bound;
    int arc = end == first ? c.arcs.front() : c.arcs.back();
    pc.border_arcs.push_back(arc);
    Vertex other = end == first ? s.head(arc) : s.tail(arc);
    if (!is_path_endpoint(s, other, comp)) pc.border_vertices.push_back(other);
  }
  std::sort(pc.border_vertices.begin(), pc.border_vertices.end());
  pc.border_vertices.erase(std::unique(pc.border_vertices.begin(), pc.border_vertices.end()),
                           pc.border_vertices.end());

  const int len = static_cast<int>(c.arcs.size());
  pc.cap = pc.bound == 2 ? len - 1 : pc.bound == 1 ? len : len + 1;
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
    if (!s.arcs[a].active() || s.arcs[a].is_cover()) continue;
    Role r = s.role_for(comp, a);
    if (r != Role::Loose) ++pc.matching_count;
  }

  auto rays = s.rays_of(comp);
  auto has_ray = [&](Vertex v, Role want) {
    return std::any_of(rays.begin(), rays.end(), [&](int r) {
      return s.role_for(comp, r) == want && (want == Role::Outray ? s.tail(r) : s.head(r)) == v;
    });
  };
  for (int e : c.arcs)
    if (has_ray(s.tail(e), Role::Outray) && has_ray(s.head(e), Role::Inray))
      pc.rayters.push_back(e);

  auto is_border_arc = [&](int e) {
    return std::find(pc.border_arcs.begin(), pc.border_arcs.end(), e) != pc.border_arcs.end();
  };
  for (int r : rays) {
    const bool inray = s.role_for(comp, r) == Role::Inray;
    const Vertex v = inray ? s.head(r) : s.tail(r);
    if (std::find(pc.border_vertices.begin(), pc.border_vertices.end(), v) ==
        pc.border_vertices.end())
      continue;
    bool good = false;
    if (v == first || v == last) {
      good = (v == first && inray) || (v == last && !inray);
    } else {
      for (std::size_t i = 0; i < c.arcs.size(); ++i) {
        int e = c.arcs[i];
        if (is_border_arc(e)) continue;
        if (s.tail(e) == v && inray) good = true;   // r enters v, e leaves it
        if (s.head(e) == v && !inray) good = true;  // e enters v, r leaves it
      }
    }
    if (good) pc.good_rays.push_back(r);
  }
  return pc;
}

void flip_cycle(Skeleton& s, int comp) {
  std::vector<int> ins, outs;
  for (int r : s.rays_of(comp)) (s.role_for(comp, r) == Role::Inray ? ins : outs).push_back(r);
  auto flips = merged(s.chords_of(comp), ins.size() >= outs.size() ? outs : ins);
  if (!place_flips(s, comp, flips))
    fail("cycle " + std::to_string(comp) + " has no free slot for " +
         std::to_string(flips.size()) + " flipped arcs");
}

PathBranch flip_path(Skeleton& s, int comp) {
  const PathClass pc = classify_path(s, comp);
  const auto rays = s.rays_of(comp);
  const auto chords = s.chords_of(comp);
  auto keep_only = [&](const std::vector<int>& keep) {
    return place_flips(s, comp, merged(without(rays, keep), chords));
  };

  if (pc.matching_count < pc.cap && keep_only({})) return PathBranch::FlipAll;
  for (int g : pc.good_rays)
    if (keep_only({g})) {
      s.kept_ray[comp] = g;
      return PathBranch::GoodRay;
    }
  for (int e : pc.rayters) {
    int out = -1, in = -1;
    for (int r : rays) {
      Role role = s.role_for(comp, r);
      if (out < 0 && role == Role::Outray && s.tail(r) == s.tail(e)) out = r;
      if (in < 0 && role == Role::Inray && s.head(r) == s.head(e)) in = r;
    }
    if (keep_only({out, in})) {
      s.rayter_pairs.push_back({out, in});
      return PathBranch::Rayter;
    }
  }
  if (pc.bound == 0) {
    std::vector<int> ins, outs;
    for (int r : rays) (s.role_for(comp, r) == Role::Inray ? ins : outs).push_back(r);
    const bool ins_first = ins.size() >= outs.size();
    if (keep_only(ins_first ? ins : outs) || keep_only(ins_first ? outs : ins))
      return PathBranch::OneDirection;
  }
  for (int r : rays)
    if (keep_only({r})) {
      s.kept_ray[comp] = r;
      return PathBranch::SingleRay;
    }
  if (rays.empty() && keep_only({})) return PathBranch::SingleRay;
  return PathBranch::Failed;
}

bool cycle_ready(const Skeleton& s, int comp) {
  const auto& c = s.comps[comp];
  if (!s.chords_of(comp).empty()) return false;
  const auto rays = s.rays_of(comp);
  int ins = 0;
  for (int r : rays) ins += s.role_for(comp, r) == Role::Inray;
  if (ins != 0 && ins != static_cast<int>(rays.size())) return false;
  const int ichords = static_cast<int>(s.ichords_of(comp).size());
  if (rays.size() < 2 && ichords > static_cast<int>(c.arcs.size()) - 2) return false;
  const auto out = s.outdeg(), in = s.indeg();
  return std::all_of(c.vertices.begin(), c.vertices.end(),
                     [&](Vertex v) { return out[v] <= 2 && in[v] <= 2; });
}

bool path_ready(const Skeleton& s, int comp) {
  if (!s.chords_of(comp).empty()) return false;
  const auto rays = s.rays_of(comp);
  if (rays.size() <= 1) return true;
  const PathClass pc = classify_path(s, comp);
  if (rays.size() == 2 && !pc.rayters.empty()) {
    for (int e : pc.rayters) {
      bool at_tail = false, at_head = false;
      for (int r : rays) {
        at_tail |= s.tail(r) == s.tail(e) && s.role_for(comp, r) == Role::Outray;
        at_head |= s.head(r) == s.head(e) && s.role_for(comp, r) == Role::Inray;
      }
      if (at_tail && at_head) return true;
    }
  }
  if (pc.bound != 0) return false;
  const Role first = s.role_for(comp, rays.front());
  return std::all_of(rays.begin(), rays.end(),
                     [&](int r) { return s.role_for(comp, r) == first; });
}

void find_allied_pairs(Skeleton& s) {
  std::erase_if(s.rayter_pairs, [&](const std::pair<int, int>& p) {
    return s.arcs[p.first].origin == Origin::Copy || s.arcs[p.second].origin == Origin::Copy;
  });
  s.allied_pairs.clear();
  // g and the border arc at shared both enter, or both leave, their common
  // vertex, so their colors must differ.
  auto touches_border = [&](int comp, int g, Vertex shared) {
    const auto& c = s.comps[comp];
    int arc = -1;
    if (c.vertices.front() == shared) arc = c.arcs.front();
    if (c.vertices.back() == shared) arc = c.arcs.back();
    if (arc < 0) return false;
    Vertex y = s.tail(arc) == shared ? s.head(arc) : s.tail(arc);
    return (s.tail(g) == y && s.tail(arc) == y) || (s.head(g) == y && s.head(arc) == y);
  };
  for (int p1 = 0; p1 < static_cast<int>(s.comps.size()); ++p1) {
    for (int p2 = p1 + 1; p2 < static_cast<int>(s.comps.size()); ++p2) {
      int g1 = s.kept_ray[p1], g2 = s.kept_ray[p2];
      if (g1 < 0 || g2 < 0 || g1 == g2) continue;
      if (s.arcs[g1].origin == Origin::Copy || s.arcs[g2].origin == Origin::Copy) continue;
      const auto& a = s.comps[p1];
      const auto& b = s.comps[p2];
      for (Vertex u : {a.vertices.front(), a.vertices.back()}) {
        if (u != b.vertices.front() && u != b.vertices.back()) continue;
        if (touches_border(p1, g1, u) && touches_border(p2, g2, u))
          s.allied_pairs.push_back({std::min(g1, g2), std::max(g1, g2)});
      }
    }
  }
  std::sort(s.allied_pairs.begin(), s.allied_pairs.end());
  s.allied_pairs.erase(std::unique(s.allied_pairs.begin(), s.allied_pairs.end()),
                       s.allied_pairs.end());
}

RayGraph build_h(const Skeleton& s) {
  RayGraph h;
  const auto member = s.membership();
  std::vector<int> node_of(s.arcs.size(), -1);
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
    if (!s.arcs[a].active() || s.arcs[a].is_cover()) continue;
    bool ray = true;
    for (Vertex v : {s.tail(a), s.head(a)})
      for (int c : member[v]) {
        Role r = s.role_for(c, a);
        if (r == Role::Ichord || r == Role::Chord) ray = false;
      }
    if (!ray) continue;
    node_of[a] = static_cast<int>(h.nodes.size());
    h.nodes.push_back(a);
  }

  // End 0 is the tail side of a ray, end 1 the head side.
  std::vector<int> used(2 * h.nodes.size(), 0);
  auto link = [&](int a, int end_a, int b, int end_b, Link kind) {
    int x = node_of[a], y = node_of[b];
    if (x < 0 || y < 0) fail("H link on a non-ray arc");
    if (used[2 * x + end_a]++ || used[2 * y + end_b]++)
      fail("H vertex of degree three at arcs " + std::to_string(a) + ", " + std::to_string(b));
    h.edges.push_back({x, y, kind});
  };
  auto end_on = [&](int comp, int r) {
    const auto& vs = s.comps[comp].vertices;
    return std::find(vs.begin(), vs.end(), s.head(r)) != vs.end() ? 1 : 0;
  };

  for (int c = 0; c < static_cast<int>(s.comps.size()); ++c) {
    if (!s.comps[c].is_cycle) continue;
    auto rays = s.rays_of(c);
    if (rays.size() >= 2) link(rays[0], end_on(c, rays[0]), rays[1], end_on(c, rays[1]), Link::Differ);
  }
  // The outray leaves the rayter's tail, the inray enters its head.
  for (auto [out, in] : s.rayter_pairs) link(out, 0, in, 1, Link::Same);
  for (auto [a, b] : s.allied_pairs) {
    auto path_end = [&](int r) {
      for (int c = 0; c < static_cast<int>(s.comps.size()); ++c)
        if (!s.comps[c].is_cycle && s.kept_ray[c] == r) return end_on(c, r);
      fail("allied ray " + std::to_string(r) + " is not a kept ray");
    };
    link(a, path_end(a), b, path_end(b), Link::Differ);
  }
  std::vector<std::vector<std::pair<int, int>>> at(s.n);  // (arc, end)
  for (int a : h.nodes) {
    if (member[s.tail(a)].empty()) at[s.tail(a)].push_back({a, 0});
    if (member[s.head(a)].empty()) at[s.head(a)].push_back({a, 1});
  }
  for (Vertex v = 0; v < s.n; ++v) {
    if (at[v].size() > 2) fail("vertex " + std::to_string(v) + " carries three rays");
    if (at[v].size() == 2) {
      auto [a, ea] = at[v][0];
      auto [b, eb] = at[v][1];
      link(a, ea, b, eb, ea == eb ? Link::Differ : Link::Free);
    }
  }
  return h;
}

void color_h(Skeleton& s, const RayGraph& h) {
  const int k = static_cast<int>(h.nodes.size());
  std::vector<std::vector<int>> inc(k);
  for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
    inc[h.edges[e].a].push_back(e);
    inc[h.edges[e].b].push_back(e);
  }
  std::vector<int> color(k, 0);
  auto next_color = [&](int c, Link kind) { return kind == Link::Same ? c : 3 - c; };
  auto other = [&](int e, int x) { return h.edges[e].a == x ? h.edges[e].b : h.edges[e].a; };
  // Colors along the component starting at x, never crossing edge skip.
  // Returns the last edge reached that closes back on a colored node.
  auto walk = [&](int x, int skip) {
    color[x] = 1;
    int prev = skip, cur = x;
    while (true) {
      int step = -1;
      for (int e : inc[cur])
        if (e != prev && e != skip) step = e;
      if (step < 0) return -1;
      int y = other(step, cur);
      if (color[y]) return step;
      color[y] = next_color(color[cur], h.edges[step].kind);
      prev = step;
      cur = y;
    }
  };
  auto satisfied = [&](int e) {
    const auto& ed = h.edges[e];
    if (ed.kind == Link::Free) return true;
    return (color[ed.a] == color[ed.b]) == (ed.kind == Link::Same);
  };
  for (int x = 0; x < k; ++x) {
    if (color[x]) continue;
    // Paths start from an end; cycles from their lowest node.
    std::vector<int> comp{x};
    std::vector<char> seen(k, 0);
    seen[x] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int e : inc[comp[i]]) {
        int y = other(e, comp[i]);
        if (!seen[y]) seen[y] = 1, comp.push_back(y);
      }
    int start = x;
    for (int y : comp)
      if (inc[y].size() < 2) {
        start = y;
        break;
      }
    for (int y : comp)
      if (inc[y].size() < 2 && y < start) start = y;
    int closing = walk(start, -1);
    if (closing < 0 || satisfied(closing)) continue;
    int free_edge = -1;
    for (int y : comp)
      for (int e : inc[y])
        if (h.edges[e].kind == Link::Free && free_edge < 0) free_edge = e;
    if (free_edge < 0)
      fail("odd cycle in H through arc " + std::to_string(h.nodes[start]) + " has no free link");
    for (int y : comp) color[y] = 0;
    walk(h.edges[free_edge].a, free_edge);
  }
  for (int x = 0; x < k; ++x) s.arcs[h.nodes[x]].color = color[x];
  s.stats.h_edges = static_cast<int>(h.edges.size());
}

namespace {

// Per color, the unique successor and predecessor of each vertex. Adding an
// arc is refused when it would give a vertex a second arc of that color
// in the same direction, or close a monochromatic cycle.
class ColorWalk {
 public:
  explicit ColorWalk(int n) {
    for (auto& v : succ_) v.assign(n, -1);
    for (auto& v : pred_) v.assign(n, -1);
  }

  bool can_add(Vertex t, Vertex h, int c) const {
    if (succ_[c][t] >= 0 || pred_[c][h] >= 0) return false;
    for (Vertex v = h; v >= 0; v = succ_[c][v])
      if (v == t) return false;
    return true;
  }
  void add(Vertex t, Vertex h, int c) {
    succ_[c][t] = h;
    pred_[c][h] = t;
  }
  void remove(Vertex t, Vertex h, int c) {
    succ_[c][t] = -1;
    pred_[c][h] = -1;
  }

 private:
  std::array<std::vector<Vertex>, 3> succ_, pred_;
};

struct Chains {
  std::vector<std::vector<int>> members;  // arc indices, BFS order
  std::vector<int> parity;                // per arc: 0 or 1 within its chain
  bool odd = false;
};

// Arcs sharing a tail, or sharing a head, must get different colors. Each
// arc has at most two such neighbours, so components are paths or cycles.
Chains conflict_chains(int n, const std::vector<std::pair<Vertex, Vertex>>& arcs, bool& too_dense) {
  const int m = static_cast<int>(arcs.size());
  std::vector<std::vector<int>> out(n), in(n), adj(m);
  for (int i = 0; i < m; ++i) {
    out[arcs[i].first].push_back(i);
    in[arcs[i].second].push_back(i);
  }
  too_dense = false;
  for (Vertex v = 0; v < n; ++v)
    for (auto* side : {&out[v], &in[v]}) {
      if (side->size() > 2) too_dense = true;
      if (side->size() == 2) {
        adj[(*side)[0]].push_back((*side)[1]);
        adj[(*side)[1]].push_back((*side)[0]);
      }
    }
  Chains ch;
  ch.parity.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    if (ch.parity[i] >= 0) continue;
    std::vector<int> comp{i};
    ch.parity[i] = 0;
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (int j : adj[comp[k]]) {
        if (ch.parity[j] < 0) {
          ch.parity[j] = 1 - ch.parity[comp[k]];
          comp.push_back(j);
        } else if (ch.parity[j] == ch.parity[comp[k]]) {
          ch.odd = true;
        }
      }
    ch.members.push_back(std::move(comp));
  }
  return ch;
}

}  // namespace

void extend_coloring(Skeleton& s) {
  std::vector<int> ids;
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
    if (s.arcs[a].active()) ids.push_back(a);
  std::vector<std::pair<Vertex, Vertex>> ends;
  for (int a : ids) ends.push_back({s.tail(a), s.head(a)});
  bool dense = false;
  Chains ch = conflict_chains(s.n, ends, dense);
  if (dense) fail("a vertex has three arcs in one direction");
  if (ch.odd) fail("odd conflict cycle");

  ColorWalk cw(s.n);
  for (const auto& comp : ch.members) {
    // A colored ray fixes the whole chain; otherwise the first arc gets 1.
    int fixed = -1;
    for (int i : comp)
      if (s.arcs[ids[i]].color) {
        int want = s.arcs[ids[i]].color;
        int c0 = ch.parity[i] == 0 ? want : 3 - want;
        if (fixed >= 0 && fixed != c0)
          fail("ray colors disagree along the chain of arc " + std::to_string(ids[i]));
        fixed = c0;
      }
    std::vector<int> options = fixed >= 0 ? std::vector<int>{fixed} : std::vector<int>{1, 2};
    bool placed = false;
    for (int c0 : options) {
      std::vector<int> added;
      bool ok = true;
      for (int i : comp) {
        int c = ch.parity[i] == 0 ? c0 : 3 - c0;
        if (!cw.can_add(ends[i].first, ends[i].second, c)) {
          ok = false;
          break;
        }
        cw.add(ends[i].first, ends[i].second, c);
        added.push_back(i);
      }
      if (ok) {
        for (int i : comp) s.arcs[ids[i]].color = ch.parity[i] == 0 ? c0 : 3 - c0;
        placed = true;
        break;
      }
      for (int i : added) {
        int c = ch.parity[i] == 0 ? c0 : 3 - c0;
        cw.remove(ends[i].first, ends[i].second, c);
      }
    }
    if (!placed)
      fail("chain of arc " + std::to_string(ids[comp.front()]) + " closes a monochromatic cycle");
  }
}

void unshrink(Skeleton& s) {
  ColorWalk cw(s.n);
  for (const auto& w : s.arcs)
    if (w.active() && w.color) {
      if (!cw.can_add(w.tail, w.head, w.color)) fail("coloring breaks once 2-cycles expand");
      cw.add(w.tail, w.head, w.color);
    }
  for (int r = static_cast<int>(s.shrinks.size()) - 1; r >= 0; --r) {
    auto& a = s.arcs[s.shrinks[r].arc_a];
    auto& b = s.arcs[s.shrinks[r].arc_b];
    bool placed = false;
    for (int ca : {1, 2}) {
      if (!cw.can_add(a.tail, a.head, ca)) continue;
      cw.add(a.tail, a.head, ca);
      if (cw.can_add(b.tail, b.head, 3 - ca)) {
        cw.add(b.tail, b.head, 3 - ca);
        a.color = ca;
        b.color = 3 - ca;
        placed = true;
        break;
      }
      cw.remove(a.tail, a.head, ca);
    }
    if (!placed)
      fail("no coloring for the 2-cycle on {" + std::to_string(s.shrinks[r].u) + "," +
           std::to_string(s.shrinks[r].v) + "}");
  }
  for (auto& r : s.shrinks) {
    s.arcs[r.arc_a].internal = -1;
    s.arcs[r.arc_b].internal = -1;
    s.rep[r.v] = r.v;
  }
}

bool search_coloring(const Multigraph& g, Coloring& col) {
  const int m = static_cast<int>(g.arcs.size());
  std::vector<std::pair<Vertex, Vertex>> ends;
  for (const auto& a : g.arcs) ends.push_back({a.tail, a.head});
  bool dense = false;
  Chains ch = conflict_chains(g.n, ends, dense);
  if (dense || ch.odd) return false;
  col.assign(m, 0);

  // Chains in different weak components never interact, so each component
  // is searched on its own.
  std::vector<int> root(g.n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& a : g.arcs) root[find(a.tail)] = find(a.head);
  std::map<int, std::vector<int>> groups;  // weak component -> chain indices
  for (int k = 0; k < static_cast<int>(ch.members.size()); ++k)
    groups[find(ends[ch.members[k].front()].first)].push_back(k);

  ColorWalk cw(g.n);
  long budget = 20'000'000;
  auto set_chain = [&](int k, int c0) {
    std::size_t done = 0;
    for (int i : ch.members[k]) {
      int c = ch.parity[i] == 0 ? c0 : 3 - c0;
      if (!cw.can_add(ends[i].first, ends[i].second, c)) break;
      cw.add(ends[i].first, ends[i].second, c);
      col[i] = c;
      ++done;
    }
    if (done == ch.members[k].size()) return true;
    for (std::size_t j = 0; j < done; ++j) {
      int i = ch.members[k][j];
      cw.remove(ends[i].first, ends[i].second, col[i]);
      col[i] = 0;
    }
    return false;
  };
  auto clear_chain = [&](int k) {
    for (int i : ch.members[k]) {
      cw.remove(ends[i].first, ends[i].second, col[i]);
      col[i] = 0;
    }
  };
  for (auto& [key, chains] : groups) {
    std::function<bool(std::size_t)> rec = [&](std::size_t at) {
      if (at == chains.size()) return true;
      if (--budget < 0) throw InvariantError("search_coloring: search budget exhausted");
      for (int c0 : {1, 2}) {
        if (!set_chain(chains[at], c0)) continue;
        if (rec(at + 1)) return true;
        clear_chain(chains[at]);
      }
      return false;
    };
    if (!rec(0)) return false;
  }
  return true;
}

namespace {

Multigraph original_graph(const Skeleton& s, std::vector<int>& index_of) {
  Multigraph g;
  g.n = s.n;
  index_of.assign(s.arcs.size(), -1);
  for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a) {
    const auto& w = s.arcs[a];
    if (!w.alive || w.weight != 1) continue;
    index_of[a] = static_cast<int>(g.arcs.size());
    g.arcs.push_back({w.tail, w.head, 1, w.origin});
  }
  return g;
}

void run_stages(Skeleton& s, Mode mode) {
  duplicate_opposite_matching_arcs(s);
  strip_zero_arcs(s);
  shrink_two_cycles(s);
  for (int c = 0; c < static_cast<int>(s.comps.size()); ++c)
    if (s.comps[c].is_cycle) {
      ++s.stats.cycles;
      flip_cycle(s, c);
    }
  for (int c = 0; c < static_cast<int>(s.comps.size()); ++c) {
    if (s.comps[c].is_cycle) continue;
    ++s.stats.paths;
    PathBranch b = flip_path(s, c);
    ++s.stats.path_branches[static_cast<int>(b)];
    if (b == PathBranch::Failed) fail("path " + std::to_string(c) + " fits no flipping case");
  }
  find_allied_pairs(s);
  for (int c = 0; c < static_cast<int>(s.comps.size()); ++c) {
    if (s.comps[c].is_cycle && !cycle_ready(s, c)) ++s.stats.fact1_violations;
    if (!s.comps[c].is_cycle && !path_ready(s, c)) ++s.stats.path_shape_violations;
  }
  s.stats.after_flip = s.active_ones();
  if (mode == Mode::Strict && s.stats.fact1_violations)
    fail(std::to_string(s.stats.fact1_violations) + " flipped cycles miss their coloring preconditions");
  color_h(s, build_h(s));
  extend_coloring(s);
  unshrink(s);
}

}  // namespace

P2CResult path2color(const AssembledMultigraph& gm, Mode mode) {
  Skeleton s(gm);
  P2CResult res;
  std::vector<int> index_of;
  try {
    run_stages(s, mode);
    res.graph = original_graph(s, index_of);
    res.coloring.assign(res.graph.arcs.size(), 0);
    for (int a = 0; a < static_cast<int>(s.arcs.size()); ++a)
      if (index_of[a] >= 0) res.coloring[index_of[a]] = s.arcs[a].color;
    if (auto v = verify_coloring(res.graph, res.coloring); !v) fail("final coloring: " + v.reason);
    for (auto [a, b] : s.rayter_pairs)
      if (s.arcs[a].color != s.arcs[b].color) fail("rayter rays differ in color");
    for (auto [a, b] : s.allied_pairs)
      if (s.arcs[a].color == s.arcs[b].color) fail("allied rays share a color");
    for (auto [a, b] : s.rayter_pairs) res.rayter_pairs.push_back({index_of[a], index_of[b]});
    for (auto [a, b] : s.allied_pairs) res.allied_pairs.push_back({index_of[a], index_of[b]});
  } catch (const InvariantError& e) {
    if (mode == Mode::Strict) throw;
    s.stats.fallback_used = true;
    s.stats.fallback_reason = e.what();
    res.rayter_pairs.clear();
    res.allied_pairs.clear();
    res.graph = original_graph(s, index_of);
    if (!search_coloring(res.graph, res.coloring)) {
      // The flips left an uncolorable graph; retry on the unflipped one.
      Skeleton plain(gm);
      duplicate_opposite_matching_arcs(plain);
      strip_zero_arcs(plain);
      res.graph = original_graph(plain, index_of);
      if (!search_coloring(res.graph, res.coloring))
        throw InvariantError("path2color: no path-2-coloring exists after " +
                             s.stats.fallback_reason);
    }
  }
  s.stats.final_ones = res.graph.weight_one_count();
  res.stats = s.stats;
  return res;
}

}  // namespace atsp01
