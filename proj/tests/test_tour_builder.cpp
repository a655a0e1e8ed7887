#include <sstream>

#include "atsp01/oracle.hpp"
#include "atsp01/tour_builder.hpp"
#include "doctest.h"

using namespace atsp01;

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

Multigraph chain_graph(int n, const std::vector<std::pair<Vertex, Vertex>>& arcs) {
  Multigraph g;
  g.n = n;
  for (auto [u, v] : arcs) g.arcs.push_back({u, v, 1, Origin::Cover});
  return g;
}

}  // namespace

TEST_CASE("select_class") {
  // Color 1: 0->1->2->3->4->5 (5 arcs); color 2: 6->7->8->9->10 (4 arcs).
  auto g = chain_graph(11, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {6, 7}, {7, 8}, {8, 9}, {9, 10}});
  Coloring col{1, 1, 1, 1, 1, 2, 2, 2, 2};
  auto cls = select_class(g, col);
  CHECK(cls.color == 1);
  CHECK(cls.weight == 5);
  CHECK(cls.paths == std::vector<std::vector<Vertex>>{{0, 1, 2, 3, 4, 5}});

  Coloring swapped{2, 2, 2, 2, 2, 1, 1, 1, 1};
  CHECK(select_class(g, swapped).color == 2);

  auto tie = chain_graph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  auto t = select_class(tie, Coloring{1, 1, 2, 2, 1, 2});
  CHECK(t.color == 1);
  CHECK(t.weight == 3);
  CHECK(t.paths == std::vector<std::vector<Vertex>>{{0, 1, 2}, {4, 5}});
}

TEST_CASE("patch_paths") {
  const Instance path(4, {{0, 1}, {1, 2}, {2, 3}});
  auto t = patch_paths(path, {{0, 1, 2, 3}});
  CHECK(t.order == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(t.weight == 3);

  const Instance empty(4, {});
  auto e = patch_paths(empty, {});
  CHECK(e.order == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(e.weight == 0);

  auto mixed = patch_paths(Instance(6, {{4, 5}, {1, 2}}), {{4, 5}, {1, 2}});
  CHECK(mixed.order == std::vector<Vertex>{0, 1, 2, 3, 4, 5});
  CHECK(mixed.weight == 2);

  CHECK_THROWS_AS(patch_paths(empty, {{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("reductions") {
  const Instance inst(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {2, 0}});
  auto c = reduce_instance(inst, Reduction::Contract, 1, 2);
  CHECK(c.n() == 4);
  // 1 and 2 merge into vertex 1; 3 and 4 shift down.
  CHECK(c.ones() == std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 0}});
  auto order = expand_tour(inst, Reduction::Contract, 1, 2, {0, 1, 2, 3});
  CHECK(order == std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(tour_weight(inst, order) == tour_weight(c, {0, 1, 2, 3}) + 1);

  CHECK(reduce_instance(inst, Reduction::Dummy).n() == 6);
  CHECK(expand_tour(inst, Reduction::Dummy, -1, -1, {0, 5, 1, 2, 3, 4}) ==
        std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(reduce_instance(Instance(2, {{0, 1}}), Reduction::Pad).n() == 4);
  CHECK_THROWS_AS(reduce_instance(inst, Reduction::Contract, 0, 2), std::invalid_argument);
}

TEST_CASE("solve examples") {
  const Instance cycle(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  REQUIRE(held_karp_max(cycle).value == 4);
  CHECK(solve(cycle).tour.weight >= 3);
  CHECK(solve(Instance(4, {})).tour.weight == 0);

  auto planted = gen_planted(9, 20, 3);
  REQUIRE(held_karp_max(planted.instance).value == 9);
  SolveOptions contract;
  contract.odd_strategy = OddStrategy::Contract;
  auto r = solve(planted.instance, contract);
  CHECK(r.tour.weight >= 7);
  CHECK(r.candidates == planted.instance.m());

  CHECK_THROWS_AS(solve(Instance(1, {})), std::invalid_argument);
  auto two = solve(Instance(2, {{0, 1}, {1, 0}}));
  CHECK(two.tour.weight == 2);
  auto three = solve(Instance(3, {{0, 1}, {1, 2}, {2, 0}}), contract);
  CHECK(three.tour.weight >= 2);
}

TEST_CASE("solve meets three quarters of the optimum") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    auto inst = gen_random(n, 0.1 + 0.1 * static_cast<double>(seed % 8), seed);
    const int opt = held_karp_max(inst).value;
    auto r = solve(inst);
    CHECK(is_permutation_of(r.tour.order, n));
    CHECK(r.tour.weight == tour_weight(inst, r.tour.order));
    CHECK(r.tour.weight >= r.class_weight);
    if (n % 2 == 0) {
      CHECK(4 * r.class_weight >= 3 * opt);
      CHECK(r.tour.weight >= ceil_div(3 * opt, 4));
    } else {
      CHECK(4 * n * r.tour.weight >= 3 * (n - 1) * opt);
    }
  }
}

TEST_CASE("solve_min12") {
  const int n = 8;
  std::vector<std::pair<Vertex, Vertex>> all;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) all.push_back({u, v});
  CHECK(solve_min12(Instance(n, all)).cost <= 2 * n - ceil_div(3 * n, 4));
  CHECK(solve_min12(Instance(n, {})).cost == 2 * n);

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto costs = gen_random(n, 0.1 + 0.05 * static_cast<double>(seed % 10), seed);
    auto r = solve_min12(costs);
    const int best = held_karp_min12(costs).value;
    CHECK(r.cost == 2 * n - tour_weight(costs, r.tour.order));
    CHECK(4 * r.cost <= 5 * best);
  }
}

namespace {

Certificate certify(const Instance& inst, OddStrategy odd = OddStrategy::Dummy) {
  SolveOptions opt;
  opt.emit_certificate = true;
  opt.odd_strategy = odd;
  return solve(inst, opt).cert;
}

std::string replace_line(const std::string& text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.substr(0, at) + to + text.substr(at + from.size());
}

}  // namespace

TEST_CASE("certificates round-trip and verify") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    auto inst = gen_random(n, 0.35, seed);
    auto odd = seed % 2 ? OddStrategy::Contract : OddStrategy::Dummy;
    auto cert = certify(inst, odd);
    CHECK(verify_certificate(cert));
    auto text = write_certificate_string(cert);
    auto back = parse_certificate_string(text);
    CHECK(write_certificate_string(back) == text);
    CHECK(verify_certificate(back));
  }
}

TEST_CASE("certificate layout") {
  auto cert = certify(Instance(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  auto text = write_certificate_string(cert);
  CHECK(text.rfind("ATSP01-CERT v1\nINSTANCE 4 4\n0 1\n", 0) == 0);
  CHECK(text.find("\nREDUCTION none\n") != std::string::npos);
  for (const char* section : {"\nMMAX ", "\nCOVER ", "\nGM ", "\nCOLORING ", "\nTOUR 4\n"})
    CHECK(text.find(section) != std::string::npos);
  CHECK(text.substr(text.size() - 4) == "END\n");
}

TEST_CASE("tampered certificates are rejected") {
  auto inst = gen_planted(8, 10, 5).instance;
  auto cert = certify(inst);
  REQUIRE(verify_certificate(cert));

  SUBCASE("tour weight") {
    auto c = cert;
    c.tour.weight += 1;
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("tour order") {
    auto c = cert;
    c.tour.order[0] = c.tour.order[1];
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("one color flipped") {
    auto c = cert;
    c.coloring[0] = 3 - c.coloring[0];
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("matching arc dropped") {
    auto c = cert;
    c.mmax.arcs.pop_back();
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("cover arc dropped") {
    auto c = cert;
    if (!c.cover.full_arcs.empty()) c.cover.full_arcs.pop_back();
    else c.cover.half_arcs.pop_back();
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("G_m arc relabeled") {
    auto c = cert;
    c.gm.arcs[0].origin = c.gm.arcs[0].origin == Origin::Matching ? Origin::Cover : Origin::Matching;
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("wrong class") {
    auto c = cert;
    c.chosen_color = 3 - c.chosen_color;
    CHECK_FALSE(verify_certificate(c));
  }
  SUBCASE("instance changed") {
    auto c = cert;
    auto ones = inst.ones();
    ones.pop_back();
    c.original = Instance(inst.n(), ones);
    CHECK_FALSE(verify_certificate(c));
  }
}

TEST_CASE("certificate parse errors carry line numbers") {
  auto text = write_certificate_string(certify(Instance(4, {{0, 1}, {2, 3}})));
  auto line_of = [](const std::string& t) {
    try {
      parse_certificate_string(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("ATSP01-CERT v2\n") == 1);
  CHECK(line_of(replace_line(text, "REDUCTION none", "REDUCTION halve")) == 5);
  CHECK(line_of(replace_line(text, "0 1\n", "0 x\n")) == 3);
  CHECK(line_of(text + "extra\n") > 5);
  CHECK(line_of(text.substr(0, text.size() - 4)) > 5);
}
