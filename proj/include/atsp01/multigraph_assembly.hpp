#pragma once

#include <utility>
#include <vector>

#include "atsp01/evading_cover.hpp"
#include "atsp01/graph_core.hpp"

namespace atsp01 {

/// The degree-3 multigraph G_m: one copy of the matching plus one copy of
/// the whole-arc cover. Arc origin tags record provenance.
struct AssembledMultigraph {
  Multigraph graph;
  /// Pairs {u,v} where a half-arc pair became a whole arc; each forms a
  /// 2-cycle with a matching arc.
  std::vector<std::pair<Vertex, Vertex>> half_pair_cycles;

  int weight_one_count() const { return graph.weight_one_count(); }
};

/// Cover whose half-arc pairs were replaced by whole arcs. Arcs created from
/// half pairs are listed separately.
struct WholeCover {
  std::vector<Arc> arcs;
  std::vector<Arc> from_half_pairs;

  int weight() const;
};

/// Each pair of half-arcs on {u,v} becomes (u,v) if m contains (v,u), and
/// (v,u) otherwise. Throws InvariantError on an unpaired half-arc.
WholeCover replace_half_arc_pairs(const EvadingCover& c, const DirectedMatching& m);

/// Throws InvariantError when a degree or multiplicity invariant fails.
AssembledMultigraph build_gm(const DirectedMatching& m, const WholeCover& c);

/// Degree 3, in/out degree at most 2, and at most two weight-1 arcs per
/// unordered pair.
Verdict check_gm_invariants(const Multigraph& g);

}  // namespace atsp01
