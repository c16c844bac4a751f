#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"

namespace kex::kernel {

struct KernelReport {
  std::vector<VertexId> kept;        // kept[new id] = old id, ascending
  std::vector<VertexId> old_to_new;  // -1 for removed vertices
  std::vector<VertexId> removed;     // ascending
  std::optional<Exchange> shortcut;  // greedy cover when it already reaches t
  int max_degree = 0;                // of the underlying undirected graph
  int greedy_vertices = 0;           // vertices used by the greedy cover
  std::uint64_t bound = 0;           // t * max_degree^L, saturating
  // greedy_vertices * (1 + sum_{d=1..L} max_degree^d), saturating; every
  // kept vertex lies within distance L of the greedy cover.
  std::uint64_t size_bound = 0;
};

// Vertices on no cycle with at most l_c edges and on no chain with at most
// l_p edges.
std::vector<VertexId> removable_vertices(const Instance& instance);

// Deletes every removable vertex in one pass; ids of the result are dense in
// the order of the old ids.
std::pair<Instance, KernelReport> kernelize(const Instance& instance);

// Repeatedly takes a shortest feasible unit (lowest canonical sequence among
// equals) and deletes its vertices until none is left.
Exchange greedy_maximal_cover(const Instance& instance);

// Feasible result when the greedy cover already reaches t (empty for t == 0).
std::optional<SolveResult> trivial_yes_check(const Instance& instance);

}  // namespace kex::kernel
