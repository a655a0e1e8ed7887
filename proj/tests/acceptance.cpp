// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "atsp01/evading_cover.hpp"
#include "atsp01/multigraph_assembly.hpp"
#include "atsp01/oracle.hpp"
#include "atsp01/path2color.hpp"
#include "atsp01/tour_builder.hpp"

using namespace atsp01;

namespace {

int ceil_frac(long long num, long long den) { return static_cast<int>((num + den - 1) / den); }

std::uint64_t mix_seed(int a, int b, int c) {
  SplitMix64 rng(static_cast<std::uint64_t>(a) * 1000003u + static_cast<std::uint64_t>(b) * 7919u +
                 static_cast<std::uint64_t>(c));
  return rng.next();
}

struct Tally {
  long long checks = 0;
  long long failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

bool report(int id, const std::string& name, const Tally& t, const std::string& extra = "") {
  const bool pass = t.failures == 0 && t.checks > 0;
  std::cout << "criterion " << id << " [" << name << "]: " << (pass ? "PASS" : "FAIL") << "  checks=" << t.checks
            << " failures=" << t.failures;
  if (!extra.empty()) std::cout << "  " << extra;
  if (!pass && !t.first.empty()) std::cout << "  first: " << t.first;
  std::cout << std::endl;
  return pass;
}

std::string tag(const char* kind, int n, std::uint64_t seed) {
  std::ostringstream s;
  s << kind << " n=" << n << " seed=" << seed;
  return s.str();
}

// Every perfect matching of g. Branches on the free node with the fewest
// free neighbours, so dead ends die at once.
void each_perfect_matching(const UGraph& g, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> mate(g.n, -1);
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      visit(mate);
      return;
    }
    int pick = -1;
    std::size_t fewest = SIZE_MAX;
    for (int v = 0; v < g.n; ++v) {
      if (mate[v] != -1) continue;
      std::size_t free = 0;
      for (int w : adj[v]) free += mate[w] == -1;
      if (free < fewest) fewest = free, pick = v;
      if (free == 0) return;
    }
    for (int w : adj[pick]) {
      if (mate[w] != -1) continue;
      mate[pick] = w;
      mate[w] = pick;
      rec(left - 2);
      mate[pick] = mate[w] = -1;
    }
  };
  if (g.n % 2 == 0) rec(g.n);
}

// Instance pool shared by criteria 1-4.
struct Case {
  Instance inst;
  int n = 0;
  std::uint64_t seed = 0;
  int opt = 0;
};

std::vector<Case> even_cases() {
  const double ps[] = {0.1, 0.3, 0.6, 0.9};
  std::vector<Case> out;
  for (int n = 4; n <= 12; n += 2)
    for (int pi = 0; pi < 4; ++pi)
      for (int t = 0; t < 200; ++t) {
        const auto seed = mix_seed(n, pi, t);
        Case c{gen_random(n, ps[pi], seed), n, seed, 0};
        c.opt = held_karp_max(c.inst).value;
        out.push_back(std::move(c));
      }
  return out;
}

std::vector<Case> odd_cases() {
  const double ps[] = {0.1, 0.3, 0.6, 0.9};
  std::vector<Case> out;
  for (int n : {5, 7, 9})
    for (int t = 0; t < 100; ++t) {
      const auto seed = mix_seed(n, 9, t);
      Case c{gen_random(n, ps[t % 4], seed), n, seed, 0};
      c.opt = held_karp_max(c.inst).value;
      out.push_back(std::move(c));
    }
  return out;
}

// Matching and cover checks on the even instance the pipeline actually sees.
void bound_checks(const Instance& even, int opt, const std::string& where, Tally& matching, Tally& cover,
                  long long& brute_compared) {
  auto m = compute_m_max(even);
  auto c = max_evading_cover(even, m);
  matching.expect(m.weight() >= ceil_frac(opt, 2), where + " w(M)=" + std::to_string(m.weight()));
  cover.expect(c.half_units() >= 2 * opt, where + " 2w(C)=" + std::to_string(c.half_units()));
  if (even.n() <= 8) {
    ++brute_compared;
    auto b = brute_evading_cover(even, m);
    cover.expect(b.half_units == c.half_units(), where + " brute cover " + std::to_string(b.half_units));
  }
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  bool all = true;
  const auto evens = even_cases();
  const auto odds = odd_cases();

  {
    Tally t;
    int fallbacks = 0;
    for (const auto& c : evens) {
      try {
        auto r = solve(c.inst);
        fallbacks += r.stats.fallback_used;
        t.expect(r.tour.weight >= ceil_frac(3LL * c.opt, 4),
                 tag("random", c.n, c.seed) + " w=" + std::to_string(r.tour.weight) + " opt=" + std::to_string(c.opt));
      } catch (const std::exception& e) {
        t.expect(false, tag("random", c.n, c.seed) + " threw " + e.what());
      }
    }
    all &= report(1, "even n ratio", t, "fallbacks=" + std::to_string(fallbacks));
  }

  {
    Tally t;
    for (const auto& c : odds) {
      for (auto strategy : {OddStrategy::Dummy, OddStrategy::Contract}) {
        SolveOptions opt;
        opt.odd_strategy = strategy;
        const bool dummy = strategy == OddStrategy::Dummy;
        const int need = dummy ? ceil_frac(3LL * (c.n - 1) * c.opt, 4LL * c.n) : ceil_frac(3LL * c.opt, 4);
        const std::string where = tag(dummy ? "dummy" : "contract", c.n, c.seed);
        try {
          auto r = solve(c.inst, opt);
          t.expect(r.tour.weight >= need, where + " w=" + std::to_string(r.tour.weight) + " need=" + std::to_string(need));
        } catch (const std::exception& e) {
          t.expect(false, where + " threw " + e.what());
        }
      }
    }
    all &= report(2, "odd n ratio", t);
  }

  {
    Tally matching, cover;
    long long brute = 0;
    for (const auto& c : evens) bound_checks(c.inst, c.opt, tag("random", c.n, c.seed), matching, cover, brute);
    for (const auto& c : odds) {
      // The pipeline runs on the dummy-padded even instance.
      auto even = reduce_instance(c.inst, Reduction::Dummy);
      bound_checks(even, held_karp_max(even).value, tag("dummy", c.n, c.seed), matching, cover, brute);
    }
    all &= report(3, "matching bound", matching);
    all &= report(4, "cover bound", cover, "brute_compared=" + std::to_string(brute));
  }

  {
    Tally t;
    long long matchings = 0;
    auto sweep = [&](const Instance& inst, const std::string& where) {
      auto m = compute_m_max(inst);
      auto gg = build_gprime(inst, m);
      each_perfect_matching(gg.graph, [&](const std::vector<int>& mate) {
        ++matchings;
        try {
          auto c = extract_cover(gg, UMatching{mate}, inst, m);
          auto v = verify_evading(c, inst, m);
          t.expect(static_cast<bool>(v), where + " " + v.reason);
        } catch (const std::exception& e) {
          t.expect(false, where + " " + e.what());
        }
      });
    };
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < 4; ++u)
      for (Vertex v = 0; v < 4; ++v)
        if (u != v) pairs.push_back({u, v});
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<std::pair<Vertex, Vertex>> ones;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask >> i & 1u) ones.push_back(pairs[i]);
      sweep(Instance(4, ones), "n=4 mask=" + std::to_string(mask));
    }
    for (const auto& c : evens)
      if (c.n == 6) sweep(c.inst, tag("random", c.n, c.seed));
    all &= report(5, "G' decoding", t, "matchings=" + std::to_string(matchings));
  }

  {
    Tally coloring, conservation;
    for (int i = 0; i < 1000; ++i) {
      const int n = 4 + 2 * (i % 19);
      const auto seed = mix_seed(n, 6, i);
      const Instance inst = n <= 12 ? gen_random(n, 0.1 + 0.1 * (i % 9), seed) : gen_planted(n, 3 * n, seed).instance;
      const std::string where = tag(n <= 12 ? "random" : "planted", n, seed);
      auto m = compute_m_max(inst);
      auto cover = max_evading_cover(inst, m);
      auto gm = build_gm(m, replace_half_arc_pairs(cover, m));
      const int expected = m.weight() + cover.half_units() / 2;
      conservation.expect(gm.weight_one_count() == expected, where + " G_m ones " + std::to_string(gm.weight_one_count()));
      try {
        auto r = path2color(gm, Mode::Strict);
        auto v = verify_coloring(r.graph, r.coloring);
        coloring.expect(static_cast<bool>(v), where + " " + v.reason);
        for (auto [a, b] : r.rayter_pairs) coloring.expect(r.coloring[a] == r.coloring[b], where + " rayter pair");
        for (auto [a, b] : r.allied_pairs) coloring.expect(r.coloring[a] != r.coloring[b], where + " allied pair");
        const auto& s = r.stats;
        for (int k : {s.gm_ones, s.after_duplicate, s.after_strip, s.after_shrink, s.after_flip, s.final_ones,
                      r.graph.weight_one_count()})
          conservation.expect(k == expected, where + " stage count " + std::to_string(k));
      } catch (const std::exception& e) {
        coloring.expect(false, where + " " + e.what());
      }
    }
    all &= report(6, "coloring validity", coloring);
    all &= report(7, "weight conservation", conservation);
  }

  {
    Tally t;
    for (int n : {20, 30, 40})
      for (int s = 0; s < 50; ++s) {
        const auto seed = mix_seed(n, 8, s);
        auto r = solve(gen_planted(n, 3 * n, seed).instance);
        t.expect(r.tour.weight >= ceil_frac(3LL * n, 4), tag("planted", n, seed) + " w=" + std::to_string(r.tour.weight));
      }
    all &= report(8, "planted ratio", t);
  }

  {
    Tally t;
    for (int n = 4; n <= 12; n += 2)
      for (int s = 0; s < 100; ++s) {
        const auto seed = mix_seed(n, 10, s);
        const Instance costs = gen_random(n, 0.1 + 0.2 * (s % 5), seed);
        const int opt = held_karp_min12(costs).value;
        auto r = solve_min12(costs);
        t.expect(r.cost <= 5 * opt / 4, tag("min12", n, seed) + " cost=" + std::to_string(r.cost) + " opt=" + std::to_string(opt));
      }
    all &= report(9, "min (1,2) ratio", t);
  }

  {
    Tally t;
    double worst = 0;
    for (int s = 0; s < 3; ++s) {
      const auto inst = gen_planted(200, 600, mix_seed(200, 11, s)).instance;
      const auto start = Clock::now();
      auto r = solve(inst);
      const double secs = std::chrono::duration<double>(Clock::now() - start).count();
      worst = std::max(worst, secs);
      t.expect(secs < 10.0 && r.tour.weight >= 150, "n=200 took " + std::to_string(secs) + "s");
    }
    std::ostringstream extra;
    extra << "worst_seconds=" << worst;
    all &= report(10, "n=200 runtime", t, extra.str());
  }

  return all ? 0 : 1;
}
