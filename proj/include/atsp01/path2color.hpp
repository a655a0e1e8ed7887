#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "atsp01/graph_core.hpp"
#include "atsp01/multigraph_assembly.hpp"

namespace atsp01 {

enum class Mode : unsigned char { Strict, Lenient };

enum class Role : unsigned char { CoverArc, Inray, Outray, Ray, Chord, Ichord, Loose };

/// One arc occurrence of the working multigraph. Endpoints are original
/// G_m vertex ids; flipping rewrites them, shrinking does not.
struct WorkArc {
  Vertex tail = 0;
  Vertex head = 0;
  int weight = 0;
  Origin origin = Origin::Matching;
  int copy_of = -1;    // duplicated cover arc, for Origin::Copy
  bool alive = true;   // false once stripped
  int internal = -1;   // shrink record that swallowed this arc
  int color = 0;

  bool is_cover() const { return origin == Origin::Cover || origin == Origin::HalfPair; }
  bool active() const { return alive && internal < 0; }
};

struct ShrinkRecord {
  Vertex u = 0;  // survivor: the shrunk vertex keeps id u
  Vertex v = 0;
  int arc_a = -1;
  int arc_b = -1;
  bool preflipped = false;  // (v,u) was turned into a second copy of (u,v)
  bool from_half_pair = false;
};

using ShrinkLog = std::vector<ShrinkRecord>;

/// A cycle, or a maximal directed path, of weight-1 cover arcs.
struct CoverComponent {
  bool is_cycle = false;
  std::vector<int> arcs;        // in traversal order
  std::vector<Vertex> vertices;  // cycles: |arcs| entries; paths: |arcs|+1
};

enum class PathBranch : unsigned char { FlipAll, GoodRay, Rayter, OneDirection, SingleRay, Failed };

struct PathClass {
  int bound = 0;  // number of endpoints shared with another path
  std::vector<Vertex> border_vertices;
  std::vector<int> border_arcs;
  std::vector<int> rayters;    // path arcs with an outray at the tail and an inray at the head
  std::vector<int> good_rays;
  int matching_count = 0;      // rays + chords + ichords incident to the path
  int cap = 0;
};

struct P2CStats {
  int gm_ones = 0;
  int after_duplicate = 0;
  int after_strip = 0;
  int after_shrink = 0;
  int after_flip = 0;
  int final_ones = 0;
  int duplicated = 0;
  int shrinks = 0;
  int cycles = 0;
  int paths = 0;
  std::array<int, 6> path_branches{};
  int fact1_violations = 0;
  int path_shape_violations = 0;
  int h_edges = 0;
  bool fallback_used = false;
  std::string fallback_reason;
};

/// Working state of the coloring pipeline.
struct Skeleton {
  int n = 0;
  std::vector<WorkArc> arcs;
  std::vector<Vertex> rep;  // current vertex of each original vertex
  std::vector<CoverComponent> comps;
  ShrinkLog shrinks;
  std::vector<std::pair<int, int>> rayter_pairs;  // (outray, inray), equal colors
  std::vector<std::pair<int, int>> allied_pairs;  // kept rays that must differ
  std::vector<int> kept_ray;  // lone ray a path kept, -1 if none
  P2CStats stats;

  explicit Skeleton(const AssembledMultigraph& gm);

  Vertex tail(int a) const { return rep[arcs[a].tail]; }
  Vertex head(int a) const { return rep[arcs[a].head]; }
  int active_ones() const;
  /// Per current vertex: cover arcs in/out, all active arcs in/out.
  std::vector<int> outdeg() const;
  std::vector<int> indeg() const;
  /// Component membership of each current vertex (up to two for shared path
  /// endpoints).
  std::vector<std::vector<int>> membership() const;
  Role role_for(int comp, int arc) const;
  /// Active non-cover arcs that are rays of comp.
  std::vector<int> rays_of(int comp) const;
  std::vector<int> chords_of(int comp) const;
  std::vector<int> ichords_of(int comp) const;
  /// Current active weight-1 arcs as a multigraph on current vertex ids.
  Multigraph current_graph(std::vector<int>* arc_ids = nullptr) const;
};

/// Decompose active cover arcs into cycles and maximal directed paths.
void decompose_cover(Skeleton& s);

void duplicate_opposite_matching_arcs(Skeleton& s);
void strip_zero_arcs(Skeleton& s);
void shrink_two_cycles(Skeleton& s);
PathClass classify_path(const Skeleton& s, int comp);
/// Throws InvariantError when the flipped arcs find no free slot.
void flip_cycle(Skeleton& s, int comp);
PathBranch flip_path(Skeleton& s, int comp);
/// Pairs lone kept rays of paths meeting at a shared endpoint. Drops rayter
/// pairs whose rays were flipped by a later path.
void find_allied_pairs(Skeleton& s);
/// Preconditions a flipped cycle must meet before coloring.
bool cycle_ready(const Skeleton& s, int comp);
/// Target shape of a flipped path.
bool path_ready(const Skeleton& s, int comp);

enum class Link : unsigned char { Same, Differ, Free };

struct RayGraph {
  std::vector<int> nodes;  // arc ids of rays and loose arcs
  struct Edge {
    int a = 0;  // indices into nodes
    int b = 0;
    Link kind = Link::Differ;
  };
  std::vector<Edge> edges;
};

/// Throws InvariantError when some ray end carries two links.
RayGraph build_h(const Skeleton& s);
/// Colors the rays of H into s.arcs[*].color. Throws InvariantError on an
/// odd cycle with no free link.
void color_h(Skeleton& s, const RayGraph& h);
/// Colors all remaining active arcs given the ray colors.
void extend_coloring(Skeleton& s);
/// Colors the swallowed 2-cycle arcs, last shrink first.
void unshrink(Skeleton& s);

/// Exhaustive search for a path-2-coloring, component by component. Used as
/// the lenient-mode fallback. Returns false when no coloring exists.
bool search_coloring(const Multigraph& g, Coloring& col);

struct P2CResult {
  Multigraph graph;    // final weight-1 multigraph on original vertex ids
  Coloring coloring;
  std::vector<std::pair<int, int>> rayter_pairs;  // indices into graph.arcs
  std::vector<std::pair<int, int>> allied_pairs;
  P2CStats stats;
};

/// Runs every stage. Strict mode throws InvariantError at the first stage
/// that cannot proceed; lenient mode falls back to search_coloring.
P2CResult path2color(const AssembledMultigraph& gm, Mode mode);

}  // namespace atsp01
