#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace atsp01 {

struct UEdge {
  int u = 0;
  int v = 0;
  std::int64_t weight = 0;
};

/// Undirected simple graph with non-negative integer edge weights.
struct UGraph {
  int n = 0;
  std::vector<UEdge> edges;

  /// Throws std::invalid_argument on loops, parallel edges, negative weights
  /// or out-of-range endpoints.
  void validate() const;
};

struct UMatching {
  std::vector<int> mate;  // -1 when unmatched

  int size() const;
  bool perfect() const;
  std::int64_t weight(const UGraph& g) const;
  /// mate symmetric and every matched pair an edge of g.
  bool valid_for(const UGraph& g) const;
};

/// Edmonds' blossom algorithm; returns a maximum-cardinality matching.
UMatching max_cardinality_matching(const UGraph& g);

/// Primal-dual blossom algorithm for maximum-weight matching. With
/// max_cardinality set, the result is of maximum weight among all
/// maximum-cardinality matchings.
UMatching max_weight_matching(const UGraph& g, bool max_cardinality);

/// Maximum-weight perfect matching, or nullopt when none exists.
std::optional<UMatching> max_weight_perfect_matching(const UGraph& g);

}  // namespace atsp01
