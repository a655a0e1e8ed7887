#include "atsp01/graph_core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace atsp01 {

Instance::Instance(int n, std::vector<std::pair<Vertex, Vertex>> ones)
    : n_(n), ones_(std::move(ones)) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  for (auto [u, v] : ones_) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("arc (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range");
    if (u == v) throw std::invalid_argument("self-loop at " + std::to_string(u));
    auto& cell = adj_[static_cast<std::size_t>(u) * n + v];
    if (cell) throw std::invalid_argument("duplicate arc (" + std::to_string(u) + "," +
                                          std::to_string(v) + ")");
    cell = 1;
  }
  std::sort(ones_.begin(), ones_.end());
}

char origin_letter(Origin o) {
  switch (o) {
    case Origin::Matching: return 'M';
    case Origin::Cover: return 'C';
    case Origin::HalfPair: return '2';
    case Origin::Copy: return 'X';
  }
  return '?';
}

int Multigraph::weight_one_count() const {
  return static_cast<int>(
      std::count_if(arcs.begin(), arcs.end(), [](const MArc& a) { return a.weight == 1; }));
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection keeps the draw unbiased; the threshold is 2^64 mod bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

namespace {

// Reads the next non-empty line; returns false on EOF.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

std::vector<long long> parse_ints(const std::string& line, int lineno) {
  std::istringstream ss(line);
  std::vector<long long> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(lineno, "expected integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError(1, "missing header 'n m'");
  auto header = parse_ints(line, lineno);
  if (header.size() != 2) throw ParseError(lineno, "header must be 'n m'");
  const long long n = header[0], m = header[1];
  if (n < 2) throw ParseError(lineno, "vertex count must be at least 2");
  if (m < 0 || m > n * (n - 1)) throw ParseError(lineno, "arc count out of range");

  std::vector<std::pair<Vertex, Vertex>> ones;
  std::vector<unsigned char> seen(static_cast<std::size_t>(n * n), 0);
  for (long long i = 0; i < m; ++i) {
    if (!next_line(in, line, lineno))
      throw ParseError(lineno + 1, "expected " + std::to_string(m) + " arcs, got " +
                                       std::to_string(i));
    auto uv = parse_ints(line, lineno);
    if (uv.size() != 2) throw ParseError(lineno, "arc line must be 'u v'");
    const long long u = uv[0], v = uv[1];
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex index out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    auto& cell = seen[static_cast<std::size_t>(u * n + v)];
    if (cell) throw ParseError(lineno, "duplicate arc");
    cell = 1;
    ones.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (next_line(in, line, lineno)) throw ParseError(lineno, "trailing data after arc list");
  return Instance(static_cast<int>(n), std::move(ones));
}

Instance parse_instance_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_instance(ss);
}

void write_instance(std::ostream& out, const Instance& inst) {
  out << inst.n() << ' ' << inst.m() << '\n';
  for (auto [u, v] : inst.ones()) out << u << ' ' << v << '\n';
}

std::string write_instance_string(const Instance& inst) {
  std::ostringstream ss;
  write_instance(ss, inst);
  return ss.str();
}

Instance gen_random(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_random: p outside [0,1]");
  SplitMix64 rng(seed);
  std::vector<std::pair<Vertex, Vertex>> ones;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      // Exact comparison r / 2^64 < p; a double quotient rounds r near 2^64 up to 1.
      const long double r = static_cast<long double>(rng.next());
      if (r < static_cast<long double>(p) * 0x1p64L) ones.emplace_back(u, v);
    }
  return Instance(n, std::move(ones));
}

Planted gen_planted(int n, int extra, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("gen_planted: n must be at least 3");
  const long long available = static_cast<long long>(n) * (n - 1) - n;
  if (extra < 0 || extra > available)
    throw std::invalid_argument("gen_planted: extra exceeds available non-cycle pairs");
  SplitMix64 rng(seed);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  std::vector<unsigned char> used(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::pair<Vertex, Vertex>> ones;
  for (int i = 0; i < n; ++i) {
    Vertex u = order[i], v = order[(i + 1) % n];
    used[static_cast<std::size_t>(u) * n + v] = 1;
    ones.emplace_back(u, v);
  }
  for (int added = 0; added < extra;) {
    Vertex u = static_cast<Vertex>(rng.below(n));
    Vertex v = static_cast<Vertex>(rng.below(n));
    auto& cell = used[static_cast<std::size_t>(u) * n + v];
    if (u == v || cell) continue;
    cell = 1;
    ones.emplace_back(u, v);
    ++added;
  }
  return {Instance(n, std::move(ones)), std::move(order)};
}

bool is_permutation_of(const std::vector<Vertex>& order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<unsigned char> seen(n, 0);
  for (Vertex v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

int tour_weight(const Instance& inst, const std::vector<Vertex>& order) {
  if (!is_permutation_of(order, inst.n()))
    throw std::invalid_argument("tour is not a permutation of the vertex set");
  int w = 0;
  const std::size_t n = order.size();
  for (std::size_t i = 0; i < n; ++i) w += inst.weight(order[i], order[(i + 1) % n]);
  return w;
}

void write_tour(std::ostream& out, const Tour& t) {
  out << "w " << t.weight << '\n';
  for (std::size_t i = 0; i < t.order.size(); ++i) out << (i ? " " : "") << t.order[i];
  out << '\n';
}

Tour parse_tour(std::istream& in, int n) {
  std::string line;
  int lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError(1, "missing weight line");
  std::istringstream head(line);
  std::string tag;
  Tour t;
  if (!(head >> tag >> t.weight) || tag != "w") throw ParseError(lineno, "expected 'w <weight>'");
  if (!next_line(in, line, lineno)) throw ParseError(lineno + 1, "missing vertex order");
  for (long long v : parse_ints(line, lineno)) t.order.push_back(static_cast<Vertex>(v));
  if (!is_permutation_of(t.order, n)) throw ParseError(lineno, "order is not a permutation");
  return t;
}

}  // namespace atsp01

namespace atsp01 {

Verdict verify_coloring(const Multigraph& g, const Coloring& col) {
  if (col.size() != g.arcs.size()) return Verdict::fail("coloring size differs from arc count");
  const int n = g.n;
  for (int color = 1; color <= 2; ++color) {
    std::vector<int> succ(n, -1), indeg(n, 0);
    for (std::size_t i = 0; i < g.arcs.size(); ++i) {
      const auto& a = g.arcs[i];
      if (col[i] != 1 && col[i] != 2)
        return Verdict::fail("arc " + std::to_string(i) + " has no valid color");
      if (col[i] != color) continue;
      if (succ[a.tail] != -1)
        return Verdict::fail("vertex " + std::to_string(a.tail) + " has two outgoing arcs of color " +
                             std::to_string(color));
      if (++indeg[a.head] > 1)
        return Verdict::fail("vertex " + std::to_string(a.head) + " has two incoming arcs of color " +
                             std::to_string(color));
      succ[a.tail] = a.head;
    }
    // With in/out degree at most one, a cycle is any walk that returns.
    std::vector<char> state(n, 0);
    for (int s = 0; s < n; ++s) {
      if (state[s]) continue;
      int v = s;
      while (v != -1 && state[v] == 0) {
        state[v] = 1;
        v = succ[v];
      }
      if (v != -1 && state[v] == 1)
        return Verdict::fail("monochromatic cycle of color " + std::to_string(color) +
                             " through vertex " + std::to_string(v));
      for (v = s; v != -1 && state[v] == 1; v = succ[v]) state[v] = 2;
    }
  }
  return Verdict::pass();
}

}  // namespace atsp01
