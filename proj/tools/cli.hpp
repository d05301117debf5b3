#pragma once

// Batch front end. Exit codes: 0 success / no violation, 1 counterexample
// or bound violation found, 2 invalid input.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expcycles/expcycles.hpp"

namespace expcycles::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kInvalid = 2;

/// g selector: a comma-separated list of values and `a..b` ranges, or one
/// of the keywords `all` and `primitive`.
struct GSelector {
  enum class Kind { list, all, primitive } kind = Kind::list;
  std::vector<std::pair<u64, u64>> ranges;

  static GSelector parse(const std::string& text) {
    GSelector sel;
    if (text == "all") {
      sel.kind = Kind::all;
      return sel;
    }
    if (text == "primitive") {
      sel.kind = Kind::primitive;
      return sel;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw InvalidInput("bad g selector: '" + text + "'");
      const auto dots = item.find("..");
      try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
          const u64 v = std::stoull(item, &used);
          if (used != item.size()) throw InvalidInput("");
          sel.ranges.emplace_back(v, v);
        } else {
          const std::string lo_text = item.substr(0, dots), hi_text = item.substr(dots + 2);
          const u64 lo = std::stoull(lo_text, &used);
          if (used != lo_text.size()) throw InvalidInput("");
          const u64 hi = std::stoull(hi_text, &used);
          if (used != hi_text.size() || lo > hi) throw InvalidInput("");
          sel.ranges.emplace_back(lo, hi);
        }
      } catch (const std::exception&) {
        throw InvalidInput("bad g selector: '" + text + "'");
      }
    }
    if (sel.ranges.empty()) throw InvalidInput("bad g selector: empty");
    return sel;
  }

  /// Values in {1, ..., p-1} selected for this p, ascending and distinct.
  std::vector<u64> values(PrimeModulus p) const {
    std::vector<u64> out;
    if (kind == Kind::all) {
      for (u64 g = 1; g < p.value(); ++g) out.push_back(g);
    } else if (kind == Kind::primitive) {
      const auto factors = factorize(p.value() - 1);
      for (u64 g = 1; g < p.value(); ++g) {
        if (is_primitive_root(g, p, factors)) out.push_back(g);
      }
    } else {
      for (auto [lo, hi] : ranges) {
        for (u64 g = std::max<u64>(lo, 1); g <= hi && g < p.value(); ++g) out.push_back(g);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
  }
};

struct SweepConfig {
  u64 p_min = 0, p_max = 0;
  std::string g_text = "all";
  std::size_t k_max = 3;
  std::string m_semantics = "least";
  bool csv = false;
  std::string out_file;
  unsigned workers = default_workers();
  u64 seed = 42;
  u64 mem_budget = kDefaultMemoryBudget;

  void validate() const {
    if (p_min > p_max) throw InvalidInput("empty range: pmin > pmax");
    if (k_max < 1) throw InvalidInput("kmax must be >= 1");
    if (workers < 1) throw InvalidInput("workers must be >= 1");
  }

  MSemantics semantics() const {
    if (m_semantics == "least") return MSemantics::least_period_3;
    if (m_semantics == "dividing") return MSemantics::period_dividing_3;
    throw InvalidInput("m-semantics must be 'least' or 'dividing'");
  }
};

/// Odd primes in [p_min, p_max].
inline std::vector<PrimeModulus> prime_range(u64 p_min, u64 p_max) {
  std::vector<PrimeModulus> out;
  if (p_max - p_min > 1'000'000'000ULL) throw InvalidInput("prime range too wide");
  if (p_max <= 100'000'000ULL) {
    for (u64 p : primes_in_range(std::max<u64>(p_min, 3), p_max)) out.emplace_back(p);
  } else {
    for (u64 p = std::max<u64>(p_min, 3); p <= p_max; ++p) {
      if (is_prime(p)) out.emplace_back(p);
    }
  }
  return out;
}

/// Runs `rows(i)` for i in [0, count) over the worker pool in fixed-size
/// chunks and streams the results in index order.
template <class Row>
void stream_rows(std::ostream& out, std::size_t count, unsigned workers, Row&& row) {
  constexpr std::size_t kChunk = 4096;
  for (std::size_t base = 0; base < count; base += kChunk) {
    const std::size_t n = std::min(kChunk, count - base);
    auto lines = parallel_map<std::string>(n, workers, [&](std::size_t i) { return row(base + i); });
    for (const auto& line : lines) {
      if (!line.empty()) out << line << '\n';
    }
  }
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(&out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  std::ostream& out() { return *out_; }

  void open_output(const SweepConfig& cfg) {
    if (cfg.out_file.empty()) return;
    file_ = std::make_unique<std::ofstream>(cfg.out_file);
    if (!*file_) throw InvalidInput("cannot open --out file: " + cfg.out_file);
    out_ = file_.get();
  }

  int census(const SweepConfig& cfg, u64 p, u64 g);
  int verify_bounds(const SweepConfig& cfg, std::optional<u64> single_p, const std::string& theorem);
  int sweep(const SweepConfig& cfg);
  int lemma_fact1(const SweepConfig& cfg, u64 count, u64 p_max, u64 u_max);
  int lemma_fact2(const SweepConfig& cfg);
  int lemma_comb(const SweepConfig& cfg, u64 count, u64 n_max);
  int lemma_thm3(const SweepConfig& cfg, std::optional<u64> single_p, u64 g);
  int ec(const SweepConfig& cfg, u64 p, u64 a, u64 b, u64 gx, u64 gy);
  int avg(const SweepConfig& cfg, u64 p, std::size_t k);

  std::ostream* out_;
  std::ostream& err_;
  std::unique_ptr<std::ofstream> file_;
};

inline std::string census_row(const SweepConfig& cfg, const ExpMap& map) {
  std::optional<FunctionalGraphSummary> graph;
  CycleCensus census;
  const u64 nodes = map.p() - 1;
  if (nodes <= kMaxGraphNodes && functional_graph_bytes(nodes) <= cfg.mem_budget) {
    auto [summary, c] = census_graph(map, cfg.k_max, cfg.mem_budget);
    graph = std::move(summary);
    census = std::move(c);
  } else {
    census = census_naive(map, cfg.k_max, cfg.workers);
  }
  return cfg.csv ? report::census_csv(map.p(), map.g(), census, graph)
                 : report::census_json(map.p(), map.g(), census, graph).dump();
}

inline int Runner::census(const SweepConfig& cfg, u64 p, u64 g) {
  const ExpMap map(PrimeModulus(p), g);
  if (cfg.csv) out() << report::census_csv_header(cfg.k_max) << '\n';
  out() << census_row(cfg, map) << '\n';
  return kOk;
}

inline int Runner::sweep(const SweepConfig& cfg) {
  const auto selector = GSelector::parse(cfg.g_text);
  std::vector<ExpMap> maps;
  for (auto p : prime_range(cfg.p_min, cfg.p_max)) {
    for (u64 g : selector.values(p)) maps.emplace_back(p, g);
  }
  if (cfg.csv) out() << report::census_csv_header(cfg.k_max) << '\n';
  SweepConfig per_task = cfg;
  per_task.workers = 1;
  stream_rows(out(), maps.size(), cfg.workers, [&](std::size_t i) { return census_row(per_task, maps[i]); });
  return kOk;
}

inline int Runner::verify_bounds(const SweepConfig& cfg, std::optional<u64> single_p, const std::string& theorem) {
  if (theorem != "1" && theorem != "2" && theorem != "3" && theorem != "all") {
    throw InvalidInput("--theorem must be 1, 2, 3 or all");
  }
  const auto selector = GSelector::parse(cfg.g_text);
  std::vector<PrimeModulus> primes;
  if (single_p) {
    primes.emplace_back(*single_p);
  } else {
    primes = prime_range(cfg.p_min, cfg.p_max);
  }
  std::vector<ExpMap> maps;
  for (auto p : primes) {
    for (u64 g : selector.values(p)) maps.emplace_back(p, g);
  }
  const VerifyOptions opts{cfg.k_max, cfg.mem_budget};
  std::vector<char> violated(maps.size(), 0);
  auto selected_violation = [&](const BoundReport& r) {
    const bool t1 = r.thm1_applicable && !r.thm1_ok;
    const bool t2 = !r.thm2_ok;
    const bool t3 = !r.thm3_ok || !r.thm3_least_ok;
    if (theorem == "1") return t1;
    if (theorem == "2") return t2;
    if (theorem == "3") return t3;
    return t1 || t2 || t3;
  };
  if (cfg.csv) out() << report::bound_csv_header(std::max<std::size_t>(cfg.k_max, 3)) << '\n';
  stream_rows(out(), maps.size(), cfg.workers, [&](std::size_t i) {
    const auto r = verify(maps[i], opts);
    violated[i] = selected_violation(r);
    return cfg.csv ? report::bound_csv(r) : report::bound_json(r).dump();
  });
  const auto violations = std::count(violated.begin(), violated.end(), 1);
  err_ << "verify-bounds: theorem " << theorem << ", " << maps.size() << " pairs, " << violations << " violations\n";
  return violations == 0 ? kOk : kViolation;
}

inline int Runner::lemma_fact1(const SweepConfig& cfg, u64 count, u64 p_max, u64 u_max) {
  if (p_max < 3) throw InvalidInput("--pmax must be >= 3");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<u64> pick_n(3, p_max), pick_u(0, u_max);
  nlohmann::json counterexamples = nlohmann::json::array();
  for (u64 i = 0; i < count; ++i) {
    u64 p = next_prime(pick_n(rng));
    if (p > p_max) p = 3;
    const u64 g = std::uniform_int_distribution<u64>(1, p - 1)(rng);
    const u64 u = pick_u(rng);
    if (!fact1_check(u, p, g)) counterexamples.push_back({{"u", u}, {"p", p}, {"g", g}});
  }
  out() << nlohmann::json{{"lemma", "fact1"}, {"checked", count}, {"seed", cfg.seed},
                          {"counterexamples", counterexamples}}.dump()
        << '\n';
  return counterexamples.empty() ? kOk : kViolation;
}

inline int Runner::lemma_fact2(const SweepConfig& cfg) {
  const auto selector = GSelector::parse(cfg.g_text);
  const auto primes = prime_range(cfg.p_min, cfg.p_max);
  struct Outcome {
    u64 checked = 0;
    std::vector<std::array<u64, 3>> bad;
  };
  auto outcomes = parallel_map<Outcome>(primes.size(), cfg.workers, [&](std::size_t i) {
    Outcome o;
    const u64 p = primes[i].value();
    for (u64 g : selector.values(primes[i])) {
      const auto set = fact2_exceptional_set(p, g);
      for (u64 y = 1; y < p; ++y, ++o.checked) {
        if (!fact2_check(p, g, y, set)) o.bad.push_back({p, g, y});
      }
    }
    return o;
  });
  u64 checked = 0;
  nlohmann::json counterexamples = nlohmann::json::array();
  for (const auto& o : outcomes) {
    checked += o.checked;
    for (const auto& [p, g, y] : o.bad) counterexamples.push_back({{"p", p}, {"g", g}, {"y", y}});
  }
  out() << nlohmann::json{{"lemma", "fact2"}, {"primes", primes.size()}, {"checked", checked},
                          {"counterexamples", counterexamples}}.dump()
        << '\n';
  return counterexamples.empty() ? kOk : kViolation;
}

inline int Runner::lemma_comb(const SweepConfig& cfg, u64 count, u64 n_max) {
  if (n_max < 1) throw InvalidInput("--nmax must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  u64 generated = 0, with_hypotheses = 0;
  nlohmann::json counterexamples = nlohmann::json::array();
  // draw until `count` instances satisfy the hypotheses (bounded number of attempts)
  while (with_hypotheses < count && generated < 100 * count + 100) {
    const auto inst = random_comb_instance(rng, n_max);
    ++generated;
    const auto r = comb_verify(inst);
    if (!r.hypotheses_ok) continue;
    ++with_hypotheses;
    if (!r.bound_ok) counterexamples.push_back(report::comb_instance_json(inst));
  }
  out() << nlohmann::json{{"lemma", "comb"},         {"generated", generated},
                          {"hypotheses_ok", with_hypotheses}, {"seed", cfg.seed},
                          {"counterexamples", counterexamples}}.dump()
        << '\n';
  if (with_hypotheses < count) {
    err_ << "lemma comb: only " << with_hypotheses << " instances satisfied the hypotheses\n";
    return kViolation;
  }
  return counterexamples.empty() ? kOk : kViolation;
}

inline int Runner::lemma_thm3(const SweepConfig& cfg, std::optional<u64> single_p, u64 g) {
  const MSemantics semantics = cfg.semantics();
  std::vector<PrimeModulus> primes;
  if (single_p) {
    const PrimeModulus p(*single_p);
    if (g % p.value() == 0 || !is_primitive_root(g, p)) {
      throw InvalidInput("g = " + std::to_string(g) + " is not a primitive root mod " + std::to_string(p.value()));
    }
    primes.push_back(p);
  } else {
    for (auto p : prime_range(cfg.p_min, cfg.p_max)) {
      if (g % p.value() != 0 && g < p.value() && is_primitive_root(g, p)) primes.push_back(p);
    }
  }
  std::vector<char> bad(primes.size(), 0);
  stream_rows(out(), primes.size(), cfg.workers, [&](std::size_t i) {
    const auto r = thm3_verify(primes[i], g, semantics);
    bad[i] = !r.ok();
    return report::thm3_json(r).dump();
  });
  const auto failures = std::count(bad.begin(), bad.end(), 1);
  err_ << "lemma thm3: " << primes.size() << " primes, " << failures << " failures\n";
  return failures == 0 ? kOk : kViolation;
}

inline int Runner::ec(const SweepConfig& cfg, u64 p, u64 a, u64 b, u64 gx, u64 gy) {
  const CurveParams curve(PrimeModulus(p), a, b);
  const ECExpMap map(curve, CurvePoint::affine(gx, gy));
  const auto census = ec_census(map, cfg.k_max, cfg.workers);
  if (cfg.csv) {
    out() << report::ec_csv_header(cfg.k_max) << '\n' << report::ec_csv(map, census) << '\n';
  } else {
    out() << report::ec_json(map, census).dump() << '\n';
  }
  return kOk;
}

inline int Runner::avg(const SweepConfig& cfg, u64 p_value, std::size_t k) {
  if (k < 1) throw InvalidInput("--k must be >= 1");
  const PrimeModulus p(p_value);
  const auto counts = parallel_map<u64>(p.value() - 1, cfg.workers, [&](std::size_t i) {
    const ExpMap map(p, i + 1);
    return census_graph(map, k, cfg.mem_budget).second.dividing(k);
  });
  u64 sum = 0, max = 0;
  for (u64 c : counts) {
    sum += c;
    max = std::max(max, c);
  }
  const double mean = static_cast<double>(sum) / static_cast<double>(p.value() - 1);
  if (cfg.csv) {
    out() << "p,k,sum,mean,max\n" << p.value() << ',' << k << ',' << sum << ',' << mean << ',' << max << '\n';
  } else {
    out() << nlohmann::json{{"p", p.value()}, {"k", k}, {"sum", sum}, {"mean", mean}, {"max", max}}.dump() << '\n';
  }
  return kOk;
}

inline void add_common(CLI::App* cmd, SweepConfig& cfg) {
  auto* fmt = cmd->add_option_group("format");
  fmt->add_flag("--csv", cfg.csv, "CSV output with a header row");
  bool json_flag = false;
  fmt->add_flag("--json", json_flag, "newline-delimited JSON output (default)");
  fmt->require_option(0, 1);
  cmd->add_option("--out", cfg.out_file, "write the report to FILE");
  cmd->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "seed for randomized checks (default 42)");
  cmd->add_option("--mem-budget", cfg.mem_budget, "bytes allowed for the functional-graph census");
}

inline int Runner::run(int argc, const char* const* argv) {
  CLI::App app{"Cycle census and bound verification for repeated exponentiation modulo a prime"};
  app.require_subcommand(1);
  SweepConfig cfg;
  u64 p = 0, g = 0, count = 0, n_max = 64, u_max = 10'000'000, a = 0, b = 0, gx = 0, gy = 0;
  std::size_t k = 1;
  std::string theorem = "all";
  std::string g_text;

  auto* census_cmd = app.add_subcommand("census", "census of one map u -> g^u mod p");
  census_cmd->add_option("--p", p, "prime modulus")->required();
  census_cmd->add_option("--g", g, "base")->required();
  census_cmd->add_option("--kmax", cfg.k_max, "largest k reported");
  add_common(census_cmd, cfg);

  auto add_range = [&](CLI::App* cmd) {
    cmd->add_option("--pmin", cfg.p_min, "smallest prime considered");
    cmd->add_option("--pmax", cfg.p_max, "largest prime considered");
  };
  auto add_g_selector = [&](CLI::App* cmd, const std::string& fallback) {
    cmd->add_option("--g", g_text, "g values: all | primitive | list of values and a..b ranges")
        ->default_str(fallback);
    cmd->add_option("--g-list", g_text, "comma-separated g values or a..b ranges");
  };

  auto* verify_cmd = app.add_subcommand("verify-bounds", "check the explicit bounds against exact censuses");
  verify_cmd->add_option("--p", p, "a single prime instead of a range");
  add_range(verify_cmd);
  add_g_selector(verify_cmd, "all");
  verify_cmd->add_option("--kmax", cfg.k_max, "largest k reported (at least 3)");
  verify_cmd->add_option("--theorem", theorem, "which bound decides the exit code: 1, 2, 3 or all");
  add_common(verify_cmd, cfg);

  auto* sweep_cmd = app.add_subcommand("sweep", "censuses over a range of primes");
  add_range(sweep_cmd);
  add_g_selector(sweep_cmd, "all");
  sweep_cmd->add_option("--kmax", cfg.k_max, "largest k reported");
  add_common(sweep_cmd, cfg);

  auto* lemma_cmd = app.add_subcommand("lemma", "instance checks of the auxiliary lemmas");
  lemma_cmd->require_subcommand(1);
  auto* fact1_cmd = lemma_cmd->add_subcommand("fact1", "exponent folding on random (u, p, g)");
  count = 1'000'000;
  fact1_cmd->add_option("--random", count, "number of random triples");
  u64 fact1_pmax = 1'000'000;
  fact1_cmd->add_option("--pmax", fact1_pmax, "largest prime drawn");
  fact1_cmd->add_option("--umax", u_max, "largest exponent drawn");
  add_common(fact1_cmd, cfg);

  auto* fact2_cmd = lemma_cmd->add_subcommand("fact2", "floor-jump exceptional set, exhaustive over y");
  add_range(fact2_cmd);
  add_g_selector(fact2_cmd, "2..13");
  add_common(fact2_cmd, cfg);

  auto* comb_cmd = lemma_cmd->add_subcommand("comb", "interval lemma on random instances");
  u64 comb_count = 1000;
  comb_cmd->add_option("--random", comb_count, "instances satisfying the hypotheses");
  comb_cmd->add_option("--nmax", n_max, "largest n");
  add_common(comb_cmd, cfg);

  auto* thm3_cmd = lemma_cmd->add_subcommand("thm3", "exceptional set and phi of the 3-cycle argument");
  thm3_cmd->add_option("--p", p, "a single prime instead of a range");
  add_range(thm3_cmd);
  u64 thm3_g = 2;
  thm3_cmd->add_option("--g", thm3_g, "primitive root (default 2)");
  thm3_cmd->add_option("--m-semantics", cfg.m_semantics, "least | dividing (default least)");
  add_common(thm3_cmd, cfg);

  auto* ec_cmd = app.add_subcommand("ec", "elliptic-curve map u -> x(uG) mod N");
  ec_cmd->add_option("--p", p, "prime field size")->required();
  ec_cmd->add_option("--a", a, "curve coefficient a")->required();
  ec_cmd->add_option("--b", b, "curve coefficient b")->required();
  ec_cmd->add_option("--gx", gx, "x-coordinate of G")->required();
  ec_cmd->add_option("--gy", gy, "y-coordinate of G")->required();
  ec_cmd->add_option("--kmax", cfg.k_max, "largest k reported");
  add_common(ec_cmd, cfg);

  auto* avg_cmd = app.add_subcommand("avg", "sum and mean of N_g(k) over g in {1, ..., p-1}");
  avg_cmd->add_option("--p", p, "prime modulus")->required();
  avg_cmd->add_option("--k", k, "cycle length k")->required();
  add_common(avg_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, *out_, err_);
  } catch (const CLI::ParseError& e) {
    app.exit(e, *out_, err_);
    return kInvalid;
  }

  try {
    open_output(cfg);
    if (census_cmd->parsed()) {
      cfg.validate();
      return census(cfg, p, g);
    }
    if (verify_cmd->parsed() || sweep_cmd->parsed() || fact2_cmd->parsed()) {
      const bool is_fact2 = fact2_cmd->parsed();
      if (g_text.empty()) g_text = is_fact2 ? "2..13" : "all";
      cfg.g_text = g_text;
      const bool single = verify_cmd->parsed() && verify_cmd->count("--p") > 0;
      if (!single) {
        CLI::App* cmd = is_fact2 ? fact2_cmd : (sweep_cmd->parsed() ? sweep_cmd : verify_cmd);
        if (!is_fact2 && cmd->count("--pmax") == 0) throw InvalidInput("--pmax (or --p) is required");
        if (is_fact2 && fact2_cmd->count("--pmin") == 0) cfg.p_min = 3;
        if (is_fact2 && fact2_cmd->count("--pmax") == 0) cfg.p_max = 10'000;
        cfg.validate();
      }
      if (is_fact2) return lemma_fact2(cfg);
      if (sweep_cmd->parsed()) return sweep(cfg);
      return verify_bounds(cfg, single ? std::optional<u64>(p) : std::nullopt, theorem);
    }
    if (fact1_cmd->parsed()) return lemma_fact1(cfg, count, fact1_pmax, u_max);
    if (comb_cmd->parsed()) return lemma_comb(cfg, comb_count, n_max);
    if (thm3_cmd->parsed()) {
      const bool single = thm3_cmd->count("--p") > 0;
      if (!single) {
        if (thm3_cmd->count("--pmax") == 0) throw InvalidInput("--pmax (or --p) is required");
        cfg.validate();
      }
      return lemma_thm3(cfg, single ? std::optional<u64>(p) : std::nullopt, thm3_g);
    }
    if (ec_cmd->parsed()) {
      cfg.validate();
      return ec(cfg, p, a, b, gx, gy);
    }
    if (avg_cmd->parsed()) return avg(cfg, p, k);
  } catch (const InvalidInput& e) {
    err_ << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const MalformedInstance& e) {
    err_ << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ResourceError& e) {
    err_ << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace expcycles::cli
