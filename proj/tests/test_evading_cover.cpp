#include <set>

#include "atsp01/evading_cover.hpp"
#include "atsp01/oracle.hpp"
#include "brute_matching.hpp"
#include "doctest.h"

using namespace atsp01;

namespace {

// Heaviest vertex-disjoint set of weight-1 arcs, by exhaustive search.
int brute_directed_matching_weight(const Instance& inst) {
  const auto& ones = inst.ones();
  int best = 0;
  std::vector<char> used(inst.n(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int w) {
    best = std::max(best, w);
    for (std::size_t j = i; j < ones.size(); ++j) {
      auto [u, v] = ones[j];
      if (used[u] || used[v]) continue;
      used[u] = used[v] = 1;
      rec(j + 1, w + 1);
      used[u] = used[v] = 0;
    }
  };
  rec(0, 0);
  return best;
}

const Instance kFourCycle(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
const Instance kTwoTwoCycles(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});

}  // namespace

TEST_CASE("compute_m_max examples") {
  auto m = compute_m_max(Instance(4, {{0, 1}, {1, 0}}));
  CHECK(m.arcs == std::vector<Arc>{{0, 1, 1}, {2, 3, 0}});
  CHECK(m.weight() == 1);
  CHECK(m.perfect());

  REQUIRE(brute_directed_matching_weight(kFourCycle) == 2);
  CHECK(compute_m_max(kFourCycle).weight() == 2);

  auto none = compute_m_max(Instance(4, {}));
  CHECK(none.arcs == std::vector<Arc>{{0, 1, 0}, {2, 3, 0}});
  CHECK_THROWS_AS(compute_m_max(Instance(5, {})), std::invalid_argument);
}

TEST_CASE("compute_m_max is maximum and perfect on random instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + 2 * static_cast<int>(seed % 5);
    auto inst = gen_random(n, 0.05 + 0.1 * static_cast<double>(seed % 8), seed);
    auto m = compute_m_max(inst);
    CHECK(m.perfect());
    CHECK(m.check(inst));
    CHECK(m.weight() == brute_directed_matching_weight(inst));
  }
}

TEST_CASE("build_gprime structure") {
  SUBCASE("no weight-1 arcs") {
    Instance inst(4, {});
    auto gg = build_gprime(inst, compute_m_max(inst));
    CHECK(gg.graph.n == 8);
    CHECK(gg.widgets.empty());
    CHECK(gg.zero_edges == 12);
    auto pm = max_weight_perfect_matching(gg.graph);
    REQUIRE(pm);
    CHECK(pm->weight(gg.graph) == 0);
  }
  SUBCASE("single arc, nothing split") {
    Instance inst(2, {{0, 1}});
    auto gg = build_gprime(inst, compute_m_max(inst));
    // out/in nodes for two vertices plus one widget; the 0-arc (1,0) is a direct edge.
    CHECK(gg.graph.n == 6);
    CHECK(gg.gadgets.empty());
    CHECK_FALSE(gg.widgets[0].split);
    CHECK(gg.zero_edges == 1);
  }
  SUBCASE("M-hit 2-cycle gets a gadget") {
    Instance inst(2, {{0, 1}, {1, 0}});
    DirectedMatching m{2, {{0, 1, 1}}};
    auto gg = build_gprime(inst, m);
    REQUIRE(gg.gadgets.size() == 1);
    CHECK(gg.widgets[0].split);
    CHECK(gg.widgets[1].split);
    CHECK(gg.graph.n == 4 + 4 + 2);
    // No perfect matching: two vertices cannot avoid the forbidden 2-cycle.
    CHECK_FALSE(max_weight_perfect_matching(gg.graph));
  }
}

TEST_CASE("extract_cover examples") {
  SUBCASE("all widgets idle decode to 0-arcs") {
    Instance inst(4, {{0, 2}});
    auto m = compute_m_max(inst);
    auto gg = build_gprime(inst, m);
    UMatching pm{std::vector<int>(gg.graph.n, -1)};
    const auto& w = gg.widgets[0];
    pm.mate[w.e1] = w.e2;
    pm.mate[w.e2] = w.e1;
    // 0-arc cycle 0 -> 1 -> 2 -> 3 -> 0 avoids the 1-arc (0,2).
    for (Vertex v = 0; v < 4; ++v) {
      pm.mate[GadgetGraph::out_node(v)] = GadgetGraph::in_node((v + 1) % 4);
      pm.mate[GadgetGraph::in_node((v + 1) % 4)] = GadgetGraph::out_node(v);
    }
    auto c = extract_cover(gg, pm, inst, m);
    CHECK(c.half_units() == 0);
    CHECK(c.full_arcs.size() == 4);
  }
  SUBCASE("two M-hit 2-cycles") {
    auto m = compute_m_max(kTwoTwoCycles);
    auto brute = brute_evading_cover(kTwoTwoCycles, m);
    REQUIRE(brute.half_units == 4);  // weight 2
    auto c = max_evading_cover(kTwoTwoCycles, m);
    CHECK(c.half_units() == 4);
    CHECK(verify_evading(c, kTwoTwoCycles, m));
  }
  SUBCASE("directed 4-cycle") {
    auto m = compute_m_max(kFourCycle);
    REQUIRE(brute_evading_cover(kFourCycle, m).half_units == 8);
    auto c = max_evading_cover(kFourCycle, m);
    CHECK(c.half_units() == 8);
    CHECK(c.full_arcs == std::vector<Arc>{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  }
}

TEST_CASE("verify_evading rejects violations") {
  Instance inst(4, {{0, 1}, {1, 0}, {2, 3}});
  DirectedMatching m{4, {{0, 1, 1}, {2, 3, 1}}};
  SUBCASE("whole M-hit 2-cycle") {
    EvadingCover c{4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 0}}, {}};
    auto v = verify_evading(c, inst, m);
    CHECK_FALSE(v);
    CHECK(v.reason.find("(ii)") != std::string::npos);
  }
  SUBCASE("outdegree two") {
    EvadingCover c{4, {{0, 1, 1}, {0, 2, 0}, {1, 3, 0}, {2, 3, 1}}, {}};
    auto v = verify_evading(c, inst, m);
    CHECK_FALSE(v);
    CHECK(v.reason.find("(i)") != std::string::npos);
  }
  SUBCASE("both halves at one vertex") {
    EvadingCover c{4, {{2, 3, 1}, {3, 2, 0}},
                   {{{0, 1, 1}, HalfPart::Tail}, {{1, 0, 1}, HalfPart::Head}}};
    auto v = verify_evading(c, inst, m);
    CHECK_FALSE(v);
  }
  SUBCASE("tail-half pair without head halves cannot close") {
    EvadingCover c{4, {{2, 0, 0}, {3, 1, 0}},
                   {{{0, 1, 1}, HalfPart::Tail}, {{1, 0, 1}, HalfPart::Tail}}};
    // 2 and 3 still need an outgoing and incoming element each.
    c.full_arcs.push_back({2, 3, 1});
    CHECK_FALSE(verify_evading(c, inst, m));
  }
  SUBCASE("half of an unsplit arc") {
    EvadingCover c{4, {}, {{{2, 3, 1}, HalfPart::Tail}}};
    CHECK_FALSE(verify_evading(c, inst, m));
  }
}

TEST_CASE("maximum evading cover equals the exhaustive optimum and bounds OPT") {
  for (std::uint64_t seed = 0; seed < 240; ++seed) {
    const int n = 4 + 2 * static_cast<int>(seed % 3);
    auto inst = gen_random(n, 0.1 + 0.1 * static_cast<double>(seed % 8), seed + 1000);
    auto m = compute_m_max(inst);
    auto c = max_evading_cover(inst, m);
    CHECK(verify_evading(c, inst, m));
    auto brute = brute_evading_cover(inst, m);
    CHECK(verify_evading(brute.witness, inst, m));
    CHECK(brute.witness.half_units() == brute.half_units);
    CHECK(c.half_units() == brute.half_units);
    const int opt = held_karp_max(inst).value;
    CHECK(c.half_units() >= 2 * opt);
    CHECK(2 * m.weight() >= opt);
  }
}

TEST_CASE("every perfect matching of G' decodes to an evading cover") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto inst = gen_random(4, 0.4 + 0.05 * static_cast<double>(seed % 6), seed + 77);
    auto m = compute_m_max(inst);
    auto gg = build_gprime(inst, m);
    int count = 0;
    atsp01::testing::enumerate_matchings(gg.graph, true, [&](const std::vector<int>& mate) {
      ++count;
      CHECK_NOTHROW(extract_cover(gg, UMatching{mate}, inst, m));
    });
    CHECK(count > 0);
  }
}
