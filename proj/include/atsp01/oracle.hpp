#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atsp01/evading_cover.hpp"
#include "atsp01/graph_core.hpp"

namespace atsp01 {

inline constexpr int kHeldKarpMaxN = 16;
inline constexpr int kBruteCoverMaxN = 8;
inline constexpr int kBruteColorMaxArcs = 20;

struct TourOracle {
  int value = 0;
  std::vector<Vertex> tour;
  std::uint64_t explored = 0;
};

/// Exact maximum tour weight by subset dynamic programming.
TourOracle held_karp_max(const Instance& inst);

/// Exact minimum tour cost where arcs of inst cost 1 and all others cost 2.
TourOracle held_karp_min12(const Instance& costs);

/// Naive enumeration of all tours through vertex 0; only for tiny n.
int enumerate_tours_max(const Instance& inst);

struct CoverOracle {
  int half_units = 0;  // weight x 2
  EvadingCover witness;
  std::uint64_t explored = 0;
};

/// Maximum-weight cover evading m by exhaustive search (n <= 8).
CoverOracle brute_evading_cover(const Instance& inst, const DirectedMatching& m);

/// Exhaustive search for a path-2-coloring. Returns nullopt when none exists.
/// Throws std::invalid_argument above max_arcs occurrences.
std::optional<Coloring> brute_path2color(const Multigraph& g, int max_arcs = kBruteColorMaxArcs);

}  // namespace atsp01
