#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "atsp01/blossom_matching.hpp"
#include "atsp01/graph_core.hpp"

namespace atsp01 {

/// Vertex-disjoint arc set. Perfect when it covers every vertex.
struct DirectedMatching {
  int n = 0;
  std::vector<Arc> arcs;

  bool perfect() const;
  int weight() const;
  bool contains(Vertex u, Vertex v) const;
  /// Arcs pairwise vertex-disjoint, in range, weights consistent with inst.
  Verdict check(const Instance& inst) const;
};

enum class HalfPart : unsigned char { Tail, Head };

/// One half of a split weight-1 arc; the tail half is incident with
/// base.tail, the head half with base.head.
struct HalfArc {
  Arc base;
  HalfPart part = HalfPart::Tail;

  Vertex vertex() const { return part == HalfPart::Tail ? base.tail : base.head; }
  friend bool operator==(const HalfArc&, const HalfArc&) = default;
  friend auto operator<=>(const HalfArc&, const HalfArc&) = default;
};

/// Relaxed cycle cover over whole arcs and half-arcs. Weights are kept in
/// half-units: a whole weight-1 arc counts 2, a half-arc counts 1.
struct EvadingCover {
  int n = 0;
  std::vector<Arc> full_arcs;
  std::vector<HalfArc> half_arcs;

  int half_units() const;
  void canonicalize();
};

/// Unordered pairs {u,v}, u < v, with both (u,v) and (v,u) weight-1 and one
/// of them in m. Their arcs are the ones split into half-arcs.
std::vector<std::pair<Vertex, Vertex>> m_hit_pairs(const Instance& inst, const DirectedMatching& m);

/// Maximum matching of the undirected support of G_1, completed to a perfect
/// matching with 0-arcs. Requires even n.
DirectedMatching compute_m_max(const Instance& inst);

struct ArcWidget {
  Vertex tail = 0;
  Vertex head = 0;
  bool split = false;
  int e1 = 0;  // node joined to tail's out-node
  int e2 = 0;  // node joined to head's in-node
};

struct HitGadget {
  Vertex u = 0;  // u < v
  Vertex v = 0;
  int a = 0;  // joined to e1(u,v) and e2(v,u)
  int b = 0;  // joined to e1(v,u) and e2(u,v)
};

/// The undirected graph G' whose perfect matchings encode evading covers.
/// Node layout: out(v) = 2v, in(v) = 2v+1, then two nodes per weight-1
/// arc, then two per hit gadget. Weight-1 arcs use the three-edge widget
/// with doubled weights {1,0,1}; 0-arcs are single 0-weight edges
/// out(u)-in(v).
struct GadgetGraph {
  int n = 0;
  UGraph graph;
  std::vector<ArcWidget> widgets;  // parallel to inst.ones()
  std::vector<HitGadget> gadgets;
  int zero_edges = 0;

  static int out_node(Vertex v) { return 2 * v; }
  static int in_node(Vertex v) { return 2 * v + 1; }
};

GadgetGraph build_gprime(const Instance& inst, const DirectedMatching& m);

/// Decodes a perfect matching of G'. Throws InvariantError if the decoded
/// structure is not a valid evading cover.
EvadingCover extract_cover(const GadgetGraph& gg, const UMatching& pm, const Instance& inst,
                           const DirectedMatching& m);

/// Checks the evading-cover conditions literally.
Verdict verify_evading(const EvadingCover& c, const Instance& inst, const DirectedMatching& m);

/// Maximum-weight cover evading m: builds G', matches, decodes.
EvadingCover max_evading_cover(const Instance& inst, const DirectedMatching& m);

}  // namespace atsp01
