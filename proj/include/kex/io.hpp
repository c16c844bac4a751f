#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"

namespace kex::io {

// Instance document:
//   {"n": N, "altruistic": [ids], "edges": [[tail, head], ...],
//    "l_p": P, "l_c": C, "t": T}
// Throws ParseError for malformed JSON / wrong shapes and ModelError for
// illegal graphs (self-loop, arc into altruistic, id out of range).
Instance parse_instance(std::string_view document);
std::string write_instance(const Instance& instance);

// Solution document:
//   {"feasible": b, "value": v, "algorithm": s, "chains": [[...]],
//    "cycles": [[...]], "stats": {...}}
// "chains"/"cycles" are omitted when the result carries no exchange.
std::string write_result(const SolveResult& result);

struct SolutionDocument {
  bool feasible = false;
  int value = 0;
  std::string algorithm;
  std::optional<Exchange> exchange;
};

SolutionDocument parse_solution(std::string_view document);

// Outcome of checking a solution document against an instance.
struct CheckReport {
  ValidationReport validation;
  std::vector<std::string> problems;  // value / feasibility mismatches
  bool ok() const { return validation.ok() && problems.empty(); }
};

CheckReport check_solution(const Instance& instance,
                           const SolutionDocument& solution);

// Legal arc capacity: every ordered pair without self-loops, minus arcs into
// the b altruistic vertices.
std::uint64_t arc_capacity(int n, int b);

// Random graph on n vertices, the first b altruistic, exactly m distinct
// arcs drawn uniformly from the legal ones. Deterministic in `seed`.
// Throws CapacityError when m exceeds arc_capacity(n, b).
CompatibilityGraph gen_random(int n, std::uint64_t m, int b,
                              std::uint64_t seed);

}  // namespace kex::io
