#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"

namespace kex::approx {

inline constexpr std::size_t kDefaultFamilyCap = 100'000;

struct SmallCycles {
  std::vector<Cycle> two;    // canonical, sorted
  std::vector<Cycle> three;  // one per vertex set, canonical, sorted
};

SmallCycles enumerate_small_cycles(const CompatibilityGraph& graph);

// Family of vertex sets, each backed by the cycle it came from.
struct PackingInstance {
  std::vector<std::vector<VertexId>> sets;  // each sorted
  std::vector<Cycle> source;
};

enum class PackingMode { exact, local_search };

struct PackingOptions {
  PackingMode mode = PackingMode::exact;
  int swap_width = 2;  // local search: replace up to w sets by w + 1
  std::size_t family_cap = kDefaultFamilyCap;
};

// Indices of pairwise disjoint sets. Exact mode maximizes their number;
// local search stops at a packing with no improving swap.
std::vector<std::size_t> set_packing(const PackingInstance& pi,
                                     const PackingOptions& options);

// Cycles-only regime: requires l_p == 0 and l_c <= 3.
SolveResult solve_approx3(const Instance& instance,
                          const PackingOptions& options = {});

}  // namespace kex::approx
