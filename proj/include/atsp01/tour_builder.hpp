#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "atsp01/evading_cover.hpp"
#include "atsp01/graph_core.hpp"
#include "atsp01/path2color.hpp"

namespace atsp01 {

enum class OddStrategy : unsigned char { Dummy, Contract };

struct SolveOptions {
  OddStrategy odd_strategy = OddStrategy::Dummy;
  Mode mode = Mode::Lenient;
  bool emit_certificate = false;
};

/// Heavier color class as vertex-disjoint directed paths.
struct ColorClass {
  int color = 1;
  int weight = 0;
  std::vector<std::vector<Vertex>> paths;
};

/// Ties go to color 1. Paths are listed by their first vertex.
ColorClass select_class(const Multigraph& g, const Coloring& col);

/// Uncovered vertices become one-vertex paths; all paths are chained by
/// increasing first vertex and the cycle is closed. Throws
/// std::invalid_argument when paths share a vertex.
Tour patch_paths(const Instance& inst, const std::vector<std::vector<Vertex>>& paths);

/// How an instance was reduced to the even one that was actually solved.
enum class Reduction : unsigned char { None, Pad, Dummy, Contract };

const char* reduction_name(Reduction r);

/// Everything needed to re-check a solution without rerunning the solver.
struct Certificate {
  Instance original;
  Reduction reduction = Reduction::None;
  Vertex contract_tail = -1;  // contracted arc, for Reduction::Contract
  Vertex contract_head = -1;
  Instance solved;
  DirectedMatching mmax;
  EvadingCover cover;
  Multigraph gm;
  Multigraph colored;  // after flipping; arcs carry the coloring
  Coloring coloring;
  int chosen_color = 1;
  int class_weight = 0;
  Tour tour;  // on the original instance
};

struct SolveResult {
  Tour tour;
  Certificate cert;  // filled only with emit_certificate
  P2CStats stats;
  int m_weight = 0;
  int cover_half_units = 0;
  int class_weight = 0;
  int candidates = 1;  // even instances solved
};

/// The reduced instance for a reduction. Pad appends isolated vertices up to
/// four, Dummy appends one. Contract merges the arc's two
/// endpoints into the tail's slot: it inherits the tail's in-arcs and the
/// head's out-arcs. Throws std::invalid_argument on a bad arc.
Instance reduce_instance(const Instance& inst, Reduction r, Vertex tail = -1, Vertex head = -1);

/// Maps a tour of the reduced instance back to the original vertices.
std::vector<Vertex> expand_tour(const Instance& inst, Reduction r, Vertex tail, Vertex head,
                                const std::vector<Vertex>& reduced_order);

/// Throws std::invalid_argument for n < 2, InvariantError on a pipeline
/// failure.
SolveResult solve(const Instance& inst, const SolveOptions& opt = {});

struct Min12Result {
  Tour tour;  // tour.weight holds the cost
  int cost = 0;
  SolveResult inner;
};

/// costs lists the cost-1 arcs; every other arc costs 2.
Min12Result solve_min12(const Instance& costs, const SolveOptions& opt = {});

void write_certificate(std::ostream& out, const Certificate& c);
std::string write_certificate_string(const Certificate& c);
/// Throws ParseError with the offending line.
Certificate parse_certificate(std::istream& in);
Certificate parse_certificate_string(const std::string& text);
/// Recomputes every derived quantity from the certificate alone.
Verdict verify_certificate(const Certificate& c);

}  // namespace atsp01
