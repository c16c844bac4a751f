#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"

namespace kex::types {

inline constexpr std::size_t kDefaultSignatureCap = 1'000'000;

// Vertices grouped by identical (in-neighbors, out-neighbors). Classes are
// numbered by their smallest vertex.
struct TypePartition {
  std::vector<std::vector<VertexId>> classes;  // each sorted
  std::vector<int> type_of;
  std::vector<std::vector<char>> class_adj;    // [from][to]
  std::vector<char> altruistic_class;          // contains an altruistic vertex

  int theta() const { return static_cast<int>(classes.size()); }
  int size(int c) const { return static_cast<int>(classes[c].size()); }
};

TypePartition compute_types(const CompatibilityGraph& graph);

struct PrunedInstance {
  Instance instance;
  std::vector<VertexId> kept;  // kept[new id] = old id
};

// Drops every non-altruistic vertex whose class also holds an altruistic
// vertex (such vertices have no in-arcs and join no unit).
PrunedInstance prune_mixed_types(const Instance& instance,
                                 const TypePartition& partition);

struct Signature {
  UnitKind kind = UnitKind::chain;
  std::vector<int> seq;  // class per position; cycles in least rotation

  int covered() const {
    const int k = static_cast<int>(seq.size());
    return kind == UnitKind::chain ? k - 1 : k;
  }
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// Path signatures start in an altruistic class and have between 2 and
// min(theta + 4, l_p + 1) positions; cycle signatures have between 2 and
// min(theta + 3, l_c) positions. Consecutive classes must be adjacent and no
// class may appear more often than it has vertices.
std::vector<Signature> enumerate_signatures(
    const Instance& instance, const TypePartition& partition,
    std::size_t cap = kDefaultSignatureCap);

// maximize sum objective[j] x[j]
// s.t. sum_j usage[j][c] x[j] <= capacity[c] for every class c,
//      0 <= x[j] <= upper[j] integral.
struct IlpModel {
  std::vector<int> objective;
  std::vector<std::vector<int>> usage;  // [variable][class]
  std::vector<int> capacity;
  std::vector<int> upper;
};

IlpModel build_ilp(const std::vector<Signature>& signatures,
                   const TypePartition& partition);

struct IlpSolution {
  int objective = 0;
  std::vector<int> x;
  std::uint64_t nodes = 0;
};

// Exact optimum by branch-and-bound; among optimal assignments the
// lexicographically smallest x is returned.
IlpSolution solve_ilp(const IlpModel& model,
                      std::size_t variable_cap = kDefaultSignatureCap);

// Realizes x[j] units of signature j from unused vertices (smallest ids
// first). Throws InternalError if some required arc is missing.
Exchange reconstruct(const std::vector<Signature>& signatures,
                     const std::vector<int>& x, const Instance& instance,
                     const TypePartition& partition);

// Requires l_p <= l_c (PreconditionError otherwise).
SolveResult solve_types(const Instance& instance,
                        std::size_t cap = kDefaultSignatureCap);

}  // namespace kex::types
