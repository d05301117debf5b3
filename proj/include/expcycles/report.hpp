#pragma once

// Machine-readable report rows. JSON output is one object per line; CSV
// output has a header row and flattens the same fields in a fixed order.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expcycles/bounds.hpp"
#include "expcycles/ecdynamics.hpp"
#include "expcycles/graph.hpp"
#include "expcycles/lemmas.hpp"

namespace expcycles::report {

using nlohmann::json;

enum class Format { json, csv };

inline json counts_json(const std::vector<std::uint64_t>& one_based) {
  return json(std::vector<std::uint64_t>(one_based.begin() + (one_based.empty() ? 0 : 1), one_based.end()));
}

inline json graph_json(const FunctionalGraphSummary& g) {
  json cycles = json::array();
  for (const auto& [len, count] : g.cycle_lengths) cycles.push_back({len, count});
  return {{"components", g.component_count},
          {"cyclic_points", g.cyclic_point_count},
          {"cycles", std::move(cycles)},
          {"max_tail", g.max_tail_length},
          {"is_permutation", g.is_permutation}};
}

/// "len:count" pairs separated by spaces.
inline std::string cycles_field(const FunctionalGraphSummary& g) {
  std::string out;
  for (const auto& [len, count] : g.cycle_lengths) {
    if (!out.empty()) out += ' ';
    out += std::to_string(len) + ':' + std::to_string(count);
  }
  return out;
}

inline json census_json(u64 p, u64 g, const CycleCensus& c, const std::optional<FunctionalGraphSummary>& graph) {
  json row{{"p", p},
           {"g", g},
           {"k", c.k_max},
           {"n_dividing", counts_json(c.n_dividing)},
           {"n_least_period", counts_json(c.n_least_period)}};
  row["graph"] = graph ? graph_json(*graph) : json(nullptr);
  return row;
}

inline std::string census_csv_header(std::size_t k_max) {
  std::string h = "p,g";
  for (std::size_t k = 1; k <= k_max; ++k) h += ",N" + std::to_string(k);
  for (std::size_t k = 1; k <= k_max; ++k) h += ",L" + std::to_string(k);
  return h + ",components,cyclic_points,max_tail,is_permutation,cycles";
}

inline std::string graph_csv(const std::optional<FunctionalGraphSummary>& graph) {
  if (!graph) return ",,,,";
  std::ostringstream os;
  os << ',' << graph->component_count << ',' << graph->cyclic_point_count << ',' << graph->max_tail_length << ','
     << (graph->is_permutation ? "true" : "false") << ',' << cycles_field(*graph);
  return os.str();
}

inline std::string census_csv(u64 p, u64 g, const CycleCensus& c, const std::optional<FunctionalGraphSummary>& graph) {
  std::ostringstream os;
  os << p << ',' << g;
  for (std::size_t k = 1; k <= c.k_max; ++k) os << ',' << c.n_dividing[k];
  for (std::size_t k = 1; k <= c.k_max; ++k) os << ',' << c.n_least_period[k];
  return os.str() + graph_csv(graph);
}

inline json bound_json(const BoundReport& r) {
  json row = census_json(r.p, r.g, r.census, r.graph);
  json thm2 = r.thm2 ? json{{"z", r.thm2->z}, {"value", r.thm2->value.str()}} : json(nullptr);
  row["bounds"] = {{"thm1", r.thm1},
                   {"thm2", std::move(thm2)},
                   {"thm3", {{"value", r.thm3.to_string()}, {"exact", r.thm3.exact.has_value()}}}};
  row["flags"] = {{"thm1", r.thm1_ok},
                  {"thm1_applicable", r.thm1_applicable},
                  {"thm1_vacuous", r.thm1_vacuous},
                  {"thm2", r.thm2_ok},
                  {"thm2_vacuous", r.thm2_vacuous},
                  {"thm3", r.thm3_ok},
                  {"thm3_least", r.thm3_least_ok},
                  {"thm3_vacuous", r.thm3_vacuous},
                  {"violation", r.violated()}};
  return row;
}

inline std::string bound_csv_header(std::size_t k_max) {
  return census_csv_header(k_max) +
         ",thm1,thm1_applicable,thm1_ok,thm2_z,thm2,thm2_ok,thm3,thm3_ok,thm3_least_ok,violation";
}

inline std::string bound_csv(const BoundReport& r) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream os;
  os << census_csv(r.p, r.g, r.census, r.graph);
  char thm1[32];
  std::snprintf(thm1, sizeof thm1, "%.6f", r.thm1);
  os << ',' << thm1 << ',' << b(r.thm1_applicable) << ',' << b(r.thm1_ok) << ',';
  if (r.thm2) {
    os << r.thm2->z << ',' << r.thm2->value.str();
  } else {
    os << ',';
  }
  os << ',' << b(r.thm2_ok) << ',' << r.thm3.to_string() << ',' << b(r.thm3_ok) << ',' << b(r.thm3_least_ok) << ','
     << b(r.violated());
  return os.str();
}

inline json set_json(const ResidueSet& s) { return json(std::vector<u64>(s.begin(), s.end())); }

inline json thm3_json(const Thm3ProofReport& r) {
  return {{"p", r.p},
          {"g", r.g},
          {"m_semantics", to_string(r.semantics)},
          {"M", set_json(r.M)},
          {"C", set_json(r.C)},
          {"S_index", set_json(r.S_index)},
          {"X", set_json(r.X)},
          {"S_size", r.S.size()},
          {"phi_total", r.phi_total},
          {"phi_lands_outside_M", r.phi_lands_outside_M},
          {"max_preimage", r.max_preimage},
          {"key_claim_violations", r.key_claim_violations},
          {"x_in_congruence_family", r.x_in_congruence_family},
          {"size_checks", {{"index_part", r.index_part_ok}, {"X", r.x_size_ok}, {"S", r.s_size_ok}}},
          {"lemma", {{"hypotheses_ok", r.lemma.hypotheses_ok}, {"bound_ok", r.lemma.bound_ok}}},
          {"bound_check", r.bound_check},
          {"ok", r.ok()}};
}

inline json comb_instance_json(const CombLemmaInstance& inst) {
  json phi = json::array();
  for (const auto& [x, y] : inst.phi) phi.push_back({x, y});
  return {{"n", inst.n}, {"k", inst.k}, {"M", set_json(inst.M)}, {"S", set_json(inst.S)}, {"phi", std::move(phi)}};
}

inline json ec_json(const ECExpMap& map, const CycleCensus& c) {
  return {{"p", map.curve().p()},
          {"a", map.curve().a()},
          {"b", map.curve().b()},
          {"G", {map.generator().x, map.generator().y}},
          {"N", map.N()},
          {"hasse_ok", map.hasse_ok()},
          {"k", c.k_max},
          {"n_dividing", counts_json(c.n_dividing)},
          {"n_least_period", counts_json(c.n_least_period)}};
}

inline std::string ec_csv_header(std::size_t k_max) {
  std::string h = "p,a,b,gx,gy,N,hasse_ok";
  for (std::size_t k = 1; k <= k_max; ++k) h += ",N" + std::to_string(k);
  for (std::size_t k = 1; k <= k_max; ++k) h += ",L" + std::to_string(k);
  return h;
}

inline std::string ec_csv(const ECExpMap& map, const CycleCensus& c) {
  std::ostringstream os;
  os << map.curve().p() << ',' << map.curve().a() << ',' << map.curve().b() << ',' << map.generator().x << ','
     << map.generator().y << ',' << map.N() << ',' << (map.hasse_ok() ? "true" : "false");
  for (std::size_t k = 1; k <= c.k_max; ++k) os << ',' << c.n_dividing[k];
  for (std::size_t k = 1; k <= c.k_max; ++k) os << ',' << c.n_least_period[k];
  return os.str();
}

}  // namespace expcycles::report
