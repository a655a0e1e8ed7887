#include "atsp01/blossom_matching.hpp"
#include "atsp01/graph_core.hpp"
#include "brute_matching.hpp"
#include "doctest.h"

using namespace atsp01;
using atsp01::testing::brute_max_cardinality;
using atsp01::testing::brute_max_perfect_weight;

namespace {

UGraph random_graph(int n, double p, int max_weight, std::uint64_t seed) {
  SplitMix64 rng(seed);
  UGraph g{n, {}};
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.unit() < p)
        g.edges.push_back({u, v, static_cast<std::int64_t>(rng.below(max_weight + 1))});
  return g;
}

UGraph petersen() {
  UGraph g{10, {}};
  for (int i = 0; i < 5; ++i) {
    g.edges.push_back({i, (i + 1) % 5, 1});
    g.edges.push_back({i, i + 5, 1});
    g.edges.push_back({5 + i, 5 + (i + 2) % 5, 1});
  }
  return g;
}

}  // namespace

TEST_CASE("max_cardinality_matching small cases") {
  UGraph tri{3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}};
  CHECK(max_cardinality_matching(tri).size() == 1);
  UGraph two{4, {{0, 1, 1}, {2, 3, 1}}};
  CHECK(max_cardinality_matching(two).size() == 2);
  auto pet = petersen();
  REQUIRE(brute_max_cardinality(pet) == 5);
  auto m = max_cardinality_matching(pet);
  CHECK(m.size() == 5);
  CHECK(m.valid_for(pet));
}

TEST_CASE("max_cardinality_matching equals exhaustive search up to 10 vertices") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 10);
    auto g = random_graph(n, 0.15 + 0.1 * static_cast<double>(seed % 6), 1, seed);
    auto m = max_cardinality_matching(g);
    CHECK(m.valid_for(g));
    CHECK(m.size() == brute_max_cardinality(g));
  }
}

TEST_CASE("max_weight_perfect_matching small cases") {
  UGraph c4{4, {{0, 1, 1}, {1, 2, 0}, {2, 3, 1}, {3, 0, 0}}};
  auto m = max_weight_perfect_matching(c4);
  REQUIRE(m);
  CHECK(m->weight(c4) == 2);
  UGraph k5{5, {}};
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) k5.edges.push_back({u, v, 1});
  CHECK_FALSE(max_weight_perfect_matching(k5));
  CHECK_THROWS_AS(max_weight_matching(UGraph{2, {{0, 1, 1}, {1, 0, 2}}}, true),
                  std::invalid_argument);
}

TEST_CASE("max_weight_perfect_matching equals exhaustive optimum up to 12 vertices") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const int n = 2 + 2 * static_cast<int>(seed % 6);
    auto g = random_graph(n, 0.3 + 0.1 * static_cast<double>(seed % 5),
                          seed % 3 == 0 ? 1 : 7, seed * 7919 + 1);
    auto expected = brute_max_perfect_weight(g);
    auto got = max_weight_perfect_matching(g);
    REQUIRE(expected.has_value() == got.has_value());
    if (got) {
      CHECK(got->valid_for(g));
      CHECK(got->perfect());
      CHECK(got->weight(g) == *expected);
    }
  }
}

TEST_CASE("max_weight_matching without cardinality constraint") {
  // A heavy middle edge beats two light outer ones.
  UGraph path{4, {{0, 1, 1}, {1, 2, 5}, {2, 3, 1}}};
  auto m = max_weight_matching(path, false);
  CHECK(m.weight(path) == 5);
  CHECK(m.size() == 1);
  auto mc = max_weight_matching(path, true);
  CHECK(mc.size() == 2);
  CHECK(mc.weight(path) == 2);
}
