#include "kex/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "kex/errors.hpp"
#include "kex/rng.hpp"

namespace kex::io {

using nlohmann::json;

namespace {

json parse_json(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

int get_int(const json& node, const std::string& field) {
  if (!node.is_number_integer())
    throw ParseError("field '" + field + "' must be an integer");
  const auto value = node.get<std::int64_t>();
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max())
    throw ParseError("field '" + field + "' out of integer range");
  return static_cast<int>(value);
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

std::vector<VertexId> get_id_list(const json& node, const std::string& field) {
  if (!node.is_array()) throw ParseError("field '" + field + "' must be an array");
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < node.size(); ++i)
    ids.push_back(get_int(node[i], field + "[" + std::to_string(i) + "]"));
  return ids;
}

json id_list(const std::vector<VertexId>& ids) {
  json arr = json::array();
  for (VertexId v : ids) arr.push_back(v);
  return arr;
}

}  // namespace

Instance parse_instance(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw ParseError("instance document must be an object");

  const int n = get_int(require(doc, "n"), "n");
  if (n < 0) throw ModelError("field 'n': negative vertex count");
  std::vector<VertexId> altruistic =
      get_id_list(require(doc, "altruistic"), "altruistic");
  for (std::size_t i = 0; i < altruistic.size(); ++i)
    if (altruistic[i] < 0 || altruistic[i] >= n)
      throw ModelError("field 'altruistic[" + std::to_string(i) +
                       "]': id out of range");

  const json& edges = require(doc, "edges");
  if (!edges.is_array()) throw ParseError("field 'edges' must be an array");
  std::vector<Arc> arcs;
  arcs.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string field = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2)
      throw ParseError("field '" + field + "' must be a [tail, head] pair");
    const VertexId u = get_int(e[0], field);
    const VertexId v = get_int(e[1], field);
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ModelError("field '" + field + "': id out of range");
    if (u == v) throw ModelError("field '" + field + "': self-loop");
    arcs.emplace_back(u, v);
  }

  const int l_p = get_int(require(doc, "l_p"), "l_p");
  const int l_c = get_int(require(doc, "l_c"), "l_c");
  const int t = get_int(require(doc, "t"), "t");

  try {
    return Instance(CompatibilityGraph(n, std::move(altruistic), std::move(arcs)),
                    l_p, l_c, t);
  } catch (const ModelError& e) {
    throw ModelError(std::string("instance: ") + e.what());
  }
}

std::string write_instance(const Instance& instance) {
  const auto& g = instance.graph;
  json doc;
  doc["n"] = g.num_vertices();
  doc["altruistic"] = id_list(g.altruistic());
  json edges = json::array();
  for (const auto& [u, v] : g.arcs()) edges.push_back({u, v});
  doc["edges"] = std::move(edges);
  doc["l_p"] = instance.l_p;
  doc["l_c"] = instance.l_c;
  doc["t"] = instance.t;
  return doc.dump() + "\n";
}

std::string write_result(const SolveResult& result) {
  json doc;
  doc["feasible"] = result.feasible;
  doc["value"] = result.value;
  doc["algorithm"] = result.algorithm;
  if (result.exchange) {
    json chains = json::array();
    for (const auto& c : result.exchange->chains)
      chains.push_back(id_list(c.vertices));
    json cycles = json::array();
    for (const auto& c : result.exchange->cycles)
      cycles.push_back(id_list(Cycle::canonical(c.vertices).vertices));
    doc["chains"] = std::move(chains);
    doc["cycles"] = std::move(cycles);
  }
  json stats = json::object();
  for (const auto& [key, value] : result.stats) {
    if (std::floor(value) == value &&
        std::abs(value) < 9.0e15)
      stats[key] = static_cast<std::int64_t>(value);
    else
      stats[key] = value;
  }
  doc["stats"] = std::move(stats);
  return doc.dump() + "\n";
}

SolutionDocument parse_solution(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw ParseError("solution document must be an object");
  SolutionDocument sol;
  const json& feasible = require(doc, "feasible");
  if (!feasible.is_boolean()) throw ParseError("field 'feasible' must be a boolean");
  sol.feasible = feasible.get<bool>();
  sol.value = get_int(require(doc, "value"), "value");
  if (auto it = doc.find("algorithm"); it != doc.end() && it->is_string())
    sol.algorithm = it->get<std::string>();

  const bool has_chains = doc.contains("chains");
  const bool has_cycles = doc.contains("cycles");
  if (has_chains || has_cycles) {
    Exchange ex;
    if (has_chains) {
      const json& chains = doc["chains"];
      if (!chains.is_array()) throw ParseError("field 'chains' must be an array");
      for (std::size_t i = 0; i < chains.size(); ++i)
        ex.chains.push_back(
            Chain{get_id_list(chains[i], "chains[" + std::to_string(i) + "]")});
    }
    if (has_cycles) {
      const json& cycles = doc["cycles"];
      if (!cycles.is_array()) throw ParseError("field 'cycles' must be an array");
      for (std::size_t i = 0; i < cycles.size(); ++i)
        ex.cycles.push_back(Cycle{
            get_id_list(cycles[i], "cycles[" + std::to_string(i) + "]")});
    }
    sol.exchange = std::move(ex);
  }
  return sol;
}

CheckReport check_solution(const Instance& instance,
                           const SolutionDocument& solution) {
  CheckReport report;
  if (!solution.exchange) {
    if (solution.feasible)
      report.problems.push_back("feasible result carries no exchange");
    return report;
  }
  report.validation = validate_exchange(instance, *solution.exchange);
  const int covered = exchange_value(*solution.exchange);
  if (covered != solution.value)
    report.problems.push_back("value " + std::to_string(solution.value) +
                              " differs from covered count " +
                              std::to_string(covered));
  if (solution.feasible && covered < instance.t)
    report.problems.push_back("feasible claimed but exchange covers " +
                              std::to_string(covered) + " < t = " +
                              std::to_string(instance.t));
  if (!solution.feasible && covered >= instance.t && report.validation.ok())
    report.problems.push_back("infeasible claimed but exchange reaches t");
  return report;
}

std::uint64_t arc_capacity(int n, int b) {
  if (n <= 0) return 0;
  return static_cast<std::uint64_t>(n - 1) * static_cast<std::uint64_t>(n - b);
}

CompatibilityGraph gen_random(int n, std::uint64_t m, int b,
                              std::uint64_t seed) {
  if (n < 0 || b < 0 || b > n)
    throw ModelError("gen_random: need 0 <= b <= n");
  const std::uint64_t capacity = arc_capacity(n, b);
  if (m > capacity)
    throw CapacityError("gen_random: " + std::to_string(m) +
                        " arcs requested but only " + std::to_string(capacity) +
                        " legal arcs exist");

  std::vector<Arc> legal;
  legal.reserve(capacity);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = b; v < n; ++v)
      if (u != v) legal.emplace_back(u, v);

  Rng rng(seed);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.below(legal.size() - i);
    std::swap(legal[i], legal[j]);
  }
  legal.resize(m);
  std::sort(legal.begin(), legal.end());

  std::vector<VertexId> altruistic(b);
  for (int i = 0; i < b; ++i) altruistic[i] = i;
  return CompatibilityGraph(n, std::move(altruistic), std::move(legal));
}

}  // namespace kex::io
