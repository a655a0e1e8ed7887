// Command-line front end: gen, solve, verify, oracle, bench, min12.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "atsp01/oracle.hpp"
#include "atsp01/tour_builder.hpp"

using namespace atsp01;

namespace {

enum Exit { kOk = 0, kMalformed = 1, kRejected = 2, kInvariant = 3 };

struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance load_instance(const std::string& path) {
  if (path == "-") return parse_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_instance(in);
}

SolveOptions solve_options(const std::string& odd, const std::string& mode) {
  SolveOptions opt;
  opt.odd_strategy = odd == "contract" ? OddStrategy::Contract : OddStrategy::Dummy;
  opt.mode = mode == "strict" ? Mode::Strict : Mode::Lenient;
  return opt;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << x;
  return s.str();
}

struct BenchArgs {
  std::vector<int> sizes;
  int trials = 10;
  std::uint64_t seed = 1;
  bool planted = false;
  double p = 0.3;
};

// One TSV row per size; OPT comes from the planted tour or Held-Karp.
void bench(const BenchArgs& a) {
  std::cout << "n\ttrials\tmin_ratio\tmean_ratio\tmin_weight\tfallbacks\n";
  SplitMix64 seeds(a.seed);
  for (int n : a.sizes) {
    if (!a.planted && n > kHeldKarpMaxN)
      throw std::invalid_argument("bench: random instances need n <= " +
                                  std::to_string(kHeldKarpMaxN) + " for the exact optimum");
    double min_ratio = 1e9, sum = 0;
    int min_weight = 1 << 30, fallbacks = 0;
    for (int t = 0; t < a.trials; ++t) {
      const std::uint64_t s = seeds.next();
      Instance inst;
      int opt;
      if (a.planted) {
        inst = gen_planted(n, std::min(3 * n, n * (n - 1) - n), s).instance;
        opt = n;
      } else {
        inst = gen_random(n, a.p, s);
        opt = held_karp_max(inst).value;
      }
      auto r = solve(inst);
      const double ratio = opt ? static_cast<double>(r.tour.weight) / opt : 1.0;
      min_ratio = std::min(min_ratio, ratio);
      sum += ratio;
      min_weight = std::min(min_weight, r.tour.weight);
      fallbacks += r.stats.fallback_used;
    }
    std::cout << n << '\t' << a.trials << '\t' << fmt(min_ratio) << '\t' << fmt(sum / a.trials)
              << '\t' << min_weight << '\t' << fallbacks << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max (0,1)-ATSP 3/4-approximation and Min (1,2)-ATSP 5/4-approximation"};
  app.require_subcommand(1);

  int n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  bool planted = false;
  int extra = 0;
  auto* gen = app.add_subcommand("gen", "Write a seeded instance to stdout");
  gen->add_option("--n", n, "Vertex count")->required()->check(CLI::Range(2, 100000));
  gen->add_option("--p", p, "Arc probability for random instances")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "Generator seed");
  gen->add_flag("--planted", planted, "Plant a Hamiltonian cycle of weight-1 arcs");
  gen->add_option("--extra", extra, "Noise arcs added to a planted cycle")->check(CLI::NonNegativeNumber);

  std::string input, cert_path, odd = "dummy", mode = "lenient";
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "Instance file, - for stdin")->required();
    cmd->add_option("--odd-strategy", odd, "Odd n handling")->check(CLI::IsMember({"dummy", "contract"}));
    cmd->add_option("--mode", mode, "Coloring mode")->check(CLI::IsMember({"strict", "lenient"}));
  };
  auto* solve_cmd = app.add_subcommand("solve", "Solve Max (0,1)-ATSP");
  add_solver_flags(solve_cmd);
  solve_cmd->add_option("--cert", cert_path, "Write a certificate here");

  auto* verify_cmd = app.add_subcommand("verify", "Re-check a certificate against an instance");
  verify_cmd->add_option("--input", input, "Instance file")->required();
  verify_cmd->add_option("--cert", cert_path, "Certificate file")->required();

  bool min12_flag = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by Held-Karp");
  oracle_cmd->add_option("--input", input, "Instance file, - for stdin")->required();
  oracle_cmd->add_flag("--min12", min12_flag, "Minimize (1,2) costs instead");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Approximation ratio table (TSV)");
  bench_cmd->add_option("--sizes", ba.sizes, "Comma-separated sizes")->required()->delimiter(',')
      ->check(CLI::Range(2, 100000));
  bench_cmd->add_option("--trials", ba.trials, "Instances per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", ba.seed, "Seed of the instance stream");
  bench_cmd->add_flag("--planted", ba.planted, "Planted instances, OPT = n");
  bench_cmd->add_option("--p", ba.p, "Arc probability for random instances")->check(CLI::Range(0.0, 1.0));

  auto* min12_cmd = app.add_subcommand("min12", "Solve Min (1,2)-ATSP; listed arcs cost 1");
  add_solver_flags(min12_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (*gen) {
      Instance inst = planted ? gen_planted(n, extra, seed).instance : gen_random(n, p, seed);
      write_instance(std::cout, inst);
    } else if (*solve_cmd) {
      Instance inst = load_instance(input);
      SolveOptions opt = solve_options(odd, mode);
      opt.emit_certificate = !cert_path.empty();
      SolveResult r = solve(inst, opt);
      write_tour(std::cout, r.tour);
      if (opt.emit_certificate) write_file(cert_path, write_certificate_string(r.cert));
      if (r.stats.fallback_used) std::cerr << "note: coloring fell back to search: " << r.stats.fallback_reason << '\n';
    } else if (*verify_cmd) {
      Instance inst = load_instance(input);
      std::ifstream in(cert_path);
      if (!in) throw std::invalid_argument("cannot open " + cert_path);
      Certificate c = parse_certificate(in);
      if (!(c.original == inst)) throw Rejected("certificate is for a different instance");
      if (auto v = verify_certificate(c); !v) throw Rejected(v.reason);
      std::cout << "ok\n";
    } else if (*oracle_cmd) {
      Instance inst = load_instance(input);
      TourOracle o = min12_flag ? held_karp_min12(inst) : held_karp_max(inst);
      std::cout << (min12_flag ? "cost " : "opt ") << o.value << '\n';
      for (std::size_t i = 0; i < o.tour.size(); ++i) std::cout << (i ? " " : "") << o.tour[i];
      std::cout << '\n';
    } else if (*bench_cmd) {
      bench(ba);
    } else if (*min12_cmd) {
      Instance inst = load_instance(input);
      Min12Result r = solve_min12(inst, solve_options(odd, mode));
      std::cout << "cost " << r.cost << '\n';
      for (std::size_t i = 0; i < r.tour.order.size(); ++i) std::cout << (i ? " " : "") << r.tour.order[i];
      std::cout << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const Rejected& e) {
    std::cout << "rejected: " << e.what() << '\n';
    return kRejected;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformed;
  }
  return kOk;
}
