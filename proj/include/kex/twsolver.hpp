#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kex/core.hpp"
#include "kex/solve_result.hpp"
#include "kex/tree_decomposition.hpp"

namespace kex::tw {

inline constexpr std::size_t kDefaultTableCap = std::size_t{1} << 22;

// One block of a bag partition: the bag vertices of one partial chain or
// cycle of the subgraph chosen so far, in their order along it.
struct Block {
  std::vector<VertexId> order;
  std::vector<Arc> arcs;  // chosen arcs between vertices of `order`, sorted
  bool cycle = false;
  int length = 0;            // edges chosen so far, forgotten parts included
  bool altruistic = false;   // starts at an altruistic vertex
  bool start_in_bag = true;  // order.front() is the first vertex
  bool end_in_bag = true;    // order.back() is the last vertex

  friend bool operator==(const Block&, const Block&) = default;
};

// Bag vertices outside every block are unused. Blocks sorted by their
// smallest vertex; cycle orders start at their smallest vertex.
struct DpState {
  std::vector<Block> blocks;
  friend bool operator==(const DpState&, const DpState&) = default;
};

// False for states that cannot extend to a feasible exchange.
bool admissible(const DpState& state, const Instance& instance);

std::string encode(const DpState& state);

// Maximum number of chosen arcs (= covered patients) over subgraphs whose
// components are feasible chains and cycles, with a traceback certificate.
// Throws CapacityError when a node table exceeds `table_cap` entries.
SolveResult dp_solve(const Instance& instance, const NiceDecomposition& nice,
                     std::size_t table_cap = kDefaultTableCap);

struct Options {
  std::optional<TreeDecomposition> decomposition;  // min-fill when absent
  std::size_t table_cap = kDefaultTableCap;
};

SolveResult solve_tw(const Instance& instance, const Options& options = {});

}  // namespace kex::tw
