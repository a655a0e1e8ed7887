#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace atsp01 {

using Vertex = int;

/// Thrown for malformed instance, tour, or certificate text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Thrown when a pipeline stage observes a structural invariant violation.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Outcome of a verifier: ok, or the first violation found.
struct Verdict {
  bool ok = true;
  std::string reason;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  int weight = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Complete loopless digraph with 0/1 weights. Only the weight-1 arcs are
/// stored; every other ordered pair is an implicit 0-arc.
class Instance {
 public:
  Instance() = default;
  /// Throws std::invalid_argument on loops, duplicates or out-of-range ids.
  Instance(int n, std::vector<std::pair<Vertex, Vertex>> ones);

  int n() const { return n_; }
  /// Weight-1 arcs in lexicographic order.
  const std::vector<std::pair<Vertex, Vertex>>& ones() const { return ones_; }
  int m() const { return static_cast<int>(ones_.size()); }

  bool is_one(Vertex u, Vertex v) const {
    return u != v && adj_[static_cast<std::size_t>(u) * n_ + v] != 0;
  }
  int weight(Vertex u, Vertex v) const { return is_one(u, v) ? 1 : 0; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.ones_ == b.ones_;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<Vertex, Vertex>> ones_;
  std::vector<unsigned char> adj_;
};

struct Tour {
  std::vector<Vertex> order;
  int weight = 0;
};

/// Origin of an arc occurrence in the assembled multigraph and later stages.
enum class Origin : unsigned char {
  Matching,  // from M_max
  Cover,     // from the evading cover
  HalfPair,  // cover arc produced from a pair of half-arcs
  Copy,      // flipped copy of another arc
};

char origin_letter(Origin o);

struct MArc {
  Vertex tail = 0;
  Vertex head = 0;
  int weight = 0;
  Origin origin = Origin::Matching;
};

struct Multigraph {
  int n = 0;
  std::vector<MArc> arcs;

  int weight_one_count() const;
};

/// Color per arc occurrence of a Multigraph: 1 or 2 (0 while unassigned).
using Coloring = std::vector<int>;

/// Each color class must be a set of vertex-disjoint directed paths.
Verdict verify_coloring(const Multigraph& g, const Coloring& col);

/// splitmix64, bit-exact with the reference constants.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// next() / 2^64 as a double in [0,1).
  double unit() { return static_cast<double>(next()) * 0x1.0p-64; }

 private:
  std::uint64_t state_;
};

Instance parse_instance(std::istream& in);
Instance parse_instance_string(const std::string& text);
void write_instance(std::ostream& out, const Instance& inst);
std::string write_instance_string(const Instance& inst);

Instance gen_random(int n, double p, std::uint64_t seed);

struct Planted {
  Instance instance;
  std::vector<Vertex> tour;
};
Planted gen_planted(int n, int extra, std::uint64_t seed);

/// Throws std::invalid_argument unless order is a permutation of [0,n).
int tour_weight(const Instance& inst, const std::vector<Vertex>& order);
bool is_permutation_of(const std::vector<Vertex>& order, int n);

void write_tour(std::ostream& out, const Tour& t);
Tour parse_tour(std::istream& in, int n);

}  // namespace atsp01
