#include "atsp01/tour_builder.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "atsp01/multigraph_assembly.hpp"

namespace atsp01 {

ColorClass select_class(const Multigraph& g, const Coloring& col) {
  if (col.size() != g.arcs.size()) throw std::invalid_argument("select_class: coloring size mismatch");
  int count[3] = {0, 0, 0};
  for (std::size_t i = 0; i < col.size(); ++i)
    if (g.arcs[i].weight == 1 && (col[i] == 1 || col[i] == 2)) ++count[col[i]];
  ColorClass cls;
  cls.color = count[2] > count[1] ? 2 : 1;
  cls.weight = count[cls.color];

  std::vector<Vertex> succ(g.n, -1);
  std::vector<char> has_pred(g.n, 0);
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (col[i] != cls.color) continue;
    const auto& a = g.arcs[i];
    if (succ[a.tail] >= 0 || has_pred[a.head])
      throw InvariantError("select_class: color class is not a set of paths");
    succ[a.tail] = a.head;
    has_pred[a.head] = 1;
  }
  int covered = 0;
  for (Vertex v = 0; v < g.n; ++v) {
    if (has_pred[v] || succ[v] < 0) continue;
    std::vector<Vertex> path{v};
    for (Vertex x = succ[v]; x >= 0; x = succ[x]) path.push_back(x);
    covered += static_cast<int>(path.size()) - 1;
    cls.paths.push_back(std::move(path));
  }
  if (covered != cls.weight) throw InvariantError("select_class: color class contains a cycle");
  return cls;
}

Tour patch_paths(const Instance& inst, const std::vector<std::vector<Vertex>>& paths) {
  const int n = inst.n();
  std::vector<char> used(n, 0);
  std::vector<std::vector<Vertex>> all;
  for (const auto& p : paths) {
    if (p.empty()) continue;
    for (Vertex v : p) {
      if (v < 0 || v >= n || used[v])
        throw std::invalid_argument("patch_paths: vertex " + std::to_string(v) +
                                    " is repeated or out of range");
      used[v] = 1;
    }
    all.push_back(p);
  }
  for (Vertex v = 0; v < n; ++v)
    if (!used[v]) all.push_back({v});
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Tour t;
  for (const auto& p : all) t.order.insert(t.order.end(), p.begin(), p.end());
  t.weight = tour_weight(inst, t.order);
  return t;
}

const char* reduction_name(Reduction r) {
  switch (r) {
    case Reduction::None: return "none";
    case Reduction::Pad: return "pad";
    case Reduction::Dummy: return "dummy";
    case Reduction::Contract: return "contract";
  }
  return "?";
}

Instance reduce_instance(const Instance& inst, Reduction r, Vertex tail, Vertex head) {
  const int n = inst.n();
  switch (r) {
    case Reduction::None: return inst;
    case Reduction::Pad: return Instance(std::max(n, 4), inst.ones());
    case Reduction::Dummy: return Instance(n + 1, inst.ones());
    case Reduction::Contract: break;
  }
  if (!inst.is_one(tail, head))
    throw std::invalid_argument("reduce_instance: contracted arc is not a weight-1 arc");
  auto id = [&](Vertex v) {
    if (v == head) v = tail;
    return v > head ? v - 1 : v;
  };
  std::vector<std::pair<Vertex, Vertex>> ones;
  for (auto [a, b] : inst.ones()) {
    // The merged vertex keeps tail's in-arcs and head's out-arcs.
    if (a == tail || b == head) continue;
    if (id(a) != id(b)) ones.push_back({id(a), id(b)});
  }
  return Instance(n - 1, ones);
}

std::vector<Vertex> expand_tour(const Instance& inst, Reduction r, Vertex tail, Vertex head,
                                const std::vector<Vertex>& reduced_order) {
  const int n = inst.n();
  std::vector<Vertex> order;
  if (r != Reduction::Contract) {
    for (Vertex v : reduced_order)
      if (v < n) order.push_back(v);
    return order;
  }
  const Vertex merged = tail > head ? tail - 1 : tail;
  for (Vertex v : reduced_order) {
    if (v == merged) {
      order.push_back(tail);
      order.push_back(head);
    } else {
      order.push_back(v >= head ? v + 1 : v);
    }
  }
  return order;
}

namespace {

struct CoreRun {
  Tour tour;  // on the solved instance
  P2CStats stats;
  DirectedMatching mmax;
  EvadingCover cover;
  Multigraph gm;
  P2CResult colored;
  ColorClass cls;
};

// Full pipeline on an instance with an even number of vertices, at least four.
CoreRun run_core(const Instance& inst, Mode mode) {
  CoreRun r;
  r.mmax = compute_m_max(inst);
  r.cover = max_evading_cover(inst, r.mmax);
  auto gm = build_gm(r.mmax, replace_half_arc_pairs(r.cover, r.mmax));
  r.gm = gm.graph;
  r.colored = path2color(gm, mode);
  r.stats = r.colored.stats;
  r.cls = select_class(r.colored.graph, r.colored.coloring);
  r.tour = patch_paths(inst, r.cls.paths);
  return r;
}

SolveResult finish(const Instance& inst, Reduction red, Vertex t, Vertex h, const Instance& solved,
                   CoreRun& run, const SolveOptions& opt) {
  SolveResult res;
  res.tour.order = expand_tour(inst, red, t, h, run.tour.order);
  res.tour.weight = tour_weight(inst, res.tour.order);
  res.stats = run.stats;
  res.m_weight = run.mmax.weight();
  res.cover_half_units = run.cover.half_units();
  res.class_weight = run.cls.weight;
  if (opt.emit_certificate) {
    auto& c = res.cert;
    c.original = inst;
    c.reduction = red;
    c.contract_tail = t;
    c.contract_head = h;
    c.solved = solved;
    c.mmax = run.mmax;
    c.cover = run.cover;
    c.gm = run.gm;
    c.colored = run.colored.graph;
    c.coloring = run.colored.coloring;
    c.chosen_color = run.cls.color;
    c.class_weight = run.cls.weight;
    c.tour = res.tour;
  }
  return res;
}

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& opt) {
  const int n = inst.n();
  if (n < 2) throw std::invalid_argument("solve: need at least two vertices");
  Reduction red = Reduction::None;
  if (n < 4) red = n % 2 ? Reduction::Dummy : Reduction::Pad;
  else if (n % 2) red = opt.odd_strategy == OddStrategy::Contract && inst.m() > 0
                            ? Reduction::Contract
                            : Reduction::Dummy;

  if (red != Reduction::Contract) {
    Instance solved = reduce_instance(inst, red);
    CoreRun run = run_core(solved, opt.mode);
    return finish(inst, red, -1, -1, solved, run, opt);
  }
  // One weight-1 arc of an optimal tour is guessed; every guess is tried.
  SolveResult best;
  bool have = false;
  for (auto [t, h] : inst.ones()) {
    Instance solved = reduce_instance(inst, red, t, h);
    CoreRun run = run_core(solved, opt.mode);
    SolveResult cand = finish(inst, red, t, h, solved, run, opt);
    if (!have || cand.tour.weight > best.tour.weight) {
      best = std::move(cand);
      have = true;
    }
  }
  best.candidates = inst.m();
  return best;
}

Min12Result solve_min12(const Instance& costs, const SolveOptions& opt) {
  // Cost 1 becomes weight 1 and cost 2 becomes weight 0.
  Min12Result r;
  r.inner = solve(costs, opt);
  r.cost = 2 * costs.n() - r.inner.tour.weight;
  r.tour.order = r.inner.tour.order;
  r.tour.weight = r.cost;
  return r;
}

namespace {

void write_arcs(std::ostream& out, const std::vector<std::pair<Vertex, Vertex>>& arcs) {
  for (auto [u, v] : arcs) out << u << ' ' << v << '\n';
}

}  // namespace

void write_certificate(std::ostream& out, const Certificate& c) {
  out << "ATSP01-CERT v1\n";
  out << "INSTANCE " << c.original.n() << ' ' << c.original.m() << '\n';
  write_arcs(out, c.original.ones());
  out << "REDUCTION " << reduction_name(c.reduction);
  if (c.reduction == Reduction::Contract) out << ' ' << c.contract_tail << ' ' << c.contract_head;
  out << '\n';
  out << "SOLVED " << c.solved.n() << ' ' << c.solved.m() << '\n';
  write_arcs(out, c.solved.ones());
  out << "MMAX " << c.mmax.arcs.size() << '\n';
  for (const auto& a : c.mmax.arcs) out << a.tail << ' ' << a.head << '\n';
  out << "COVER " << c.cover.full_arcs.size() << ' ' << c.cover.half_arcs.size() << '\n';
  for (const auto& a : c.cover.full_arcs) out << a.tail << ' ' << a.head << '\n';
  for (const auto& h : c.cover.half_arcs)
    out << h.base.tail << ' ' << h.base.head << ' ' << (h.part == HalfPart::Tail ? 'T' : 'H') << '\n';
  out << "GM " << c.gm.arcs.size() << '\n';
  for (const auto& a : c.gm.arcs) out << a.tail << ' ' << a.head << ' ' << origin_letter(a.origin) << '\n';
  out << "COLORING " << c.colored.arcs.size() << ' ' << c.chosen_color << ' ' << c.class_weight << '\n';
  for (std::size_t i = 0; i < c.colored.arcs.size(); ++i) {
    const auto& a = c.colored.arcs[i];
    int copy = 1;
    for (std::size_t j = 0; j < i; ++j)
      copy += c.colored.arcs[j].tail == a.tail && c.colored.arcs[j].head == a.head;
    out << a.tail << ' ' << a.head << ' ' << copy << ' ' << c.coloring[i] << '\n';
  }
  out << "TOUR " << c.tour.weight << '\n';
  for (std::size_t i = 0; i < c.tour.order.size(); ++i)
    out << (i ? " " : "") << c.tour.order[i];
  out << "\nEND\n";
}

std::string write_certificate_string(const Certificate& c) {
  std::ostringstream out;
  write_certificate(out, c);
  return out.str();
}

namespace {

class CertReader {
 public:
  explicit CertReader(std::istream& in) : in_(in) {}

  // Next non-blank line, split on whitespace.
  std::vector<std::string> next(const char* want) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      std::istringstream ss(text);
      std::vector<std::string> toks;
      for (std::string t; ss >> t;) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    throw ParseError(line_ + 1, std::string("unexpected end of certificate, expected ") + want);
  }
  std::vector<std::string> section(const char* name, std::size_t fields) {
    auto t = next(name);
    if (t[0] != name || t.size() != fields + 1)
      error(std::string("expected '") + name + "' with " + std::to_string(fields) + " fields");
    return t;
  }
  int num(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) error("bad integer '" + s + "'");
    return v;
  }
  std::pair<Vertex, Vertex> arc(const std::vector<std::string>& t, std::size_t fields) {
    if (t.size() != fields) error("expected " + std::to_string(fields) + " fields");
    return {num(t[0]), num(t[1])};
  }
  [[noreturn]] void error(const std::string& what) { throw ParseError(line_, what); }
  int line() const { return line_; }
  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

Instance read_instance(CertReader& r, const char* name) {
  auto h = r.section(name, 2);
  const int n = r.num(h[1]), m = r.num(h[2]);
  if (m < 0) r.error("negative arc count");
  std::vector<std::pair<Vertex, Vertex>> ones;
  for (int i = 0; i < m; ++i) ones.push_back(r.arc(r.next("an arc"), 2));
  try {
    return Instance(n, ones);
  } catch (const std::invalid_argument& e) {
    r.error(e.what());
  }
}

}  // namespace

Certificate parse_certificate(std::istream& in) {
  CertReader r(in);
  Certificate c;
  auto head = r.next("header");
  if (head.size() != 2 || head[0] != "ATSP01-CERT" || head[1] != "v1")
    r.error("expected header 'ATSP01-CERT v1'");
  c.original = read_instance(r, "INSTANCE");

  auto red = r.next("REDUCTION");
  if (red[0] != "REDUCTION" || red.size() < 2) r.error("expected 'REDUCTION'");
  const std::string kind = red[1];
  if (kind == "contract") {
    if (red.size() != 4) r.error("contract needs the contracted arc");
    c.reduction = Reduction::Contract;
    c.contract_tail = r.num(red[2]);
    c.contract_head = r.num(red[3]);
  } else {
    if (red.size() != 2) r.error("unexpected fields after the reduction");
    if (kind == "none") c.reduction = Reduction::None;
    else if (kind == "pad") c.reduction = Reduction::Pad;
    else if (kind == "dummy") c.reduction = Reduction::Dummy;
    else r.error("unknown reduction '" + kind + "'");
  }
  c.solved = read_instance(r, "SOLVED");
  const int n = c.solved.n();

  const int k = r.num(r.section("MMAX", 1)[1]);
  c.mmax.n = n;
  for (int i = 0; i < k; ++i) {
    auto [u, v] = r.arc(r.next("a matching arc"), 2);
    if (u < 0 || v < 0 || u >= n || v >= n) r.error("matching arc out of range");
    c.mmax.arcs.push_back({u, v, c.solved.weight(u, v)});
  }

  auto ch = r.section("COVER", 2);
  const int full = r.num(ch[1]), half = r.num(ch[2]);
  c.cover.n = n;
  for (int i = 0; i < full; ++i) {
    auto [u, v] = r.arc(r.next("a cover arc"), 2);
    if (u < 0 || v < 0 || u >= n || v >= n) r.error("cover arc out of range");
    c.cover.full_arcs.push_back({u, v, c.solved.weight(u, v)});
  }
  for (int i = 0; i < half; ++i) {
    auto t = r.next("a half-arc");
    auto [u, v] = r.arc(t, 3);
    if (u < 0 || v < 0 || u >= n || v >= n) r.error("half-arc out of range");
    if (t[2] != "T" && t[2] != "H") r.error("half-arc part must be T or H");
    c.cover.half_arcs.push_back({{u, v, c.solved.weight(u, v)}, t[2] == "T" ? HalfPart::Tail : HalfPart::Head});
  }

  const int g = r.num(r.section("GM", 1)[1]);
  c.gm.n = n;
  for (int i = 0; i < g; ++i) {
    auto t = r.next("a G_m arc");
    auto [u, v] = r.arc(t, 3);
    if (u < 0 || v < 0 || u >= n || v >= n) r.error("G_m arc out of range");
    Origin o;
    if (t[2] == "M") o = Origin::Matching;
    else if (t[2] == "C") o = Origin::Cover;
    else if (t[2] == "2") o = Origin::HalfPair;
    else r.error("G_m origin must be M, C or 2");
    c.gm.arcs.push_back({u, v, c.solved.weight(u, v), o});
  }

  auto colh = r.section("COLORING", 3);
  const int kc = r.num(colh[1]);
  c.chosen_color = r.num(colh[2]);
  c.class_weight = r.num(colh[3]);
  c.colored.n = n;
  for (int i = 0; i < kc; ++i) {
    auto t = r.next("a colored arc");
    auto [u, v] = r.arc(t, 4);
    if (u < 0 || v < 0 || u >= n || v >= n) r.error("colored arc out of range");
    int copy = 1;
    for (const auto& a : c.colored.arcs) copy += a.tail == u && a.head == v;
    if (r.num(t[2]) != copy) r.error("copy number should be " + std::to_string(copy));
    c.colored.arcs.push_back({u, v, c.solved.weight(u, v), Origin::Matching});
    c.coloring.push_back(r.num(t[3]));
  }

  c.tour.weight = r.num(r.section("TOUR", 1)[1]);
  for (const auto& t : r.next("the tour order")) c.tour.order.push_back(r.num(t));
  auto end = r.next("END");
  if (end.size() != 1 || end[0] != "END") r.error("expected 'END'");
  std::string rest;
  while (std::getline(in, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos)
      throw ParseError(r.line() + 1, "trailing data after END");
  }
  return c;
}

Certificate parse_certificate_string(const std::string& text) {
  std::istringstream in(text);
  return parse_certificate(in);
}

Verdict verify_certificate(const Certificate& c) {
  const int n0 = c.original.n();
  if (n0 < 2) return Verdict::fail("instance has fewer than two vertices");
  switch (c.reduction) {
    case Reduction::None:
      if (n0 % 2 || n0 < 4) return Verdict::fail("no reduction needs an even instance of size >= 4");
      break;
    case Reduction::Pad:
      if (n0 >= 4 || n0 % 2) return Verdict::fail("pad applies only to two vertices");
      break;
    case Reduction::Dummy:
      if (n0 % 2 == 0) return Verdict::fail("dummy applies only to odd instances");
      break;
    case Reduction::Contract:
      if (n0 % 2 == 0 || n0 < 5) return Verdict::fail("contract applies only to odd instances of size >= 5");
      break;
  }
  try {
    if (!(reduce_instance(c.original, c.reduction, c.contract_tail, c.contract_head) == c.solved))
      return Verdict::fail("SOLVED does not match the reduced instance");
  } catch (const std::invalid_argument& e) {
    return Verdict::fail(std::string("reduction: ") + e.what());
  }
  const Instance& inst = c.solved;

  if (auto v = c.mmax.check(inst); !v) return Verdict::fail("MMAX: " + v.reason);
  if (!c.mmax.perfect()) return Verdict::fail("MMAX is not perfect");
  if (c.mmax.weight() != compute_m_max(inst).weight())
    return Verdict::fail("MMAX weight is below the maximum");
  if (auto v = verify_evading(c.cover, inst, c.mmax); !v) return Verdict::fail("COVER: " + v.reason);

  AssembledMultigraph gm;
  try {
    gm = build_gm(c.mmax, replace_half_arc_pairs(c.cover, c.mmax));
  } catch (const InvariantError& e) {
    return Verdict::fail(std::string("GM: ") + e.what());
  }
  auto key = [](const Multigraph& g) {
    std::vector<std::tuple<Vertex, Vertex, int>> k;
    for (const auto& a : g.arcs) k.emplace_back(a.tail, a.head, static_cast<int>(a.origin));
    std::sort(k.begin(), k.end());
    return k;
  };
  if (key(gm.graph) != key(c.gm)) return Verdict::fail("GM differs from M_max plus the cover");
  if (auto v = check_gm_invariants(c.gm); !v) return Verdict::fail("GM: " + v.reason);

  if (c.coloring.size() != c.colored.arcs.size()) return Verdict::fail("COLORING size mismatch");
  for (const auto& a : c.colored.arcs)
    if (!inst.is_one(a.tail, a.head))
      return Verdict::fail("COLORING arc (" + std::to_string(a.tail) + "," + std::to_string(a.head) +
                           ") is not a weight-1 arc");
  if (c.colored.weight_one_count() != c.gm.weight_one_count())
    return Verdict::fail("COLORING has " + std::to_string(c.colored.weight_one_count()) +
                         " weight-1 arcs, GM has " + std::to_string(c.gm.weight_one_count()));
  if (auto v = verify_coloring(c.colored, c.coloring); !v) return Verdict::fail("COLORING: " + v.reason);
  ColorClass cls = select_class(c.colored, c.coloring);
  if (cls.color != c.chosen_color || cls.weight != c.class_weight)
    return Verdict::fail("chosen class is not the heavier color class");
  if (2 * cls.weight < c.gm.weight_one_count())
    return Verdict::fail("chosen class is lighter than half of G_m");

  if (!is_permutation_of(c.tour.order, n0)) return Verdict::fail("TOUR is not a permutation");
  const int w = tour_weight(c.original, c.tour.order);
  if (w != c.tour.weight)
    return Verdict::fail("TOUR weight is " + std::to_string(w) + ", certificate says " +
                         std::to_string(c.tour.weight));
  const int floor = c.class_weight + (c.reduction == Reduction::Contract ? 1 : 0);
  if (w < floor) return Verdict::fail("TOUR is lighter than the chosen class");
  return Verdict::pass();
}

}  // namespace atsp01
