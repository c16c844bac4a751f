#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"

namespace kex::oracle {

inline constexpr std::size_t kDefaultUnitCap = 1'000'000;

// Every feasible unit of an instance. Units are ordered by decreasing
// covered count, ties by (kind, vertex sequence); masks[i] is the vertex
// set of units[i] (root included for chains).
struct UnitCatalog {
  std::vector<Unit> units;
  std::vector<std::uint64_t> masks;
};

// Chains with 1..l_p edges rooted in an altruistic vertex and cycles with
// 2..l_c edges in canonical rotation, each exactly once. Requires n <= 64;
// throws CapacityError beyond that or when more than `unit_cap` units exist.
UnitCatalog enumerate_units(const Instance& instance,
                            std::size_t unit_cap = kDefaultUnitCap);

// Builds a catalog from an explicit unit list (masks derived).
UnitCatalog make_catalog(std::vector<Unit> units);

struct Cover {
  int value = 0;
  Exchange exchange;
  std::vector<std::size_t> selected;  // ascending catalog indices
};

// Maximum-value set of pairwise disjoint units. Among optimal sets the
// lexicographically smallest index set is returned.
Cover max_disjoint_cover(const UnitCatalog& catalog, const Instance& instance);

SolveResult solve_exact(const Instance& instance,
                        std::size_t unit_cap = kDefaultUnitCap);

}  // namespace kex::oracle
