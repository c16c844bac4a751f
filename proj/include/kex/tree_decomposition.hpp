#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kex/core.hpp"

namespace kex::tw {

struct TreeDecomposition {
  std::vector<std::vector<VertexId>> bags;  // each sorted
  std::vector<std::pair<int, int>> edges;   // tree edges between bag indices

  int width() const;
};

// Min-fill elimination heuristic; ties broken by lowest vertex id.
TreeDecomposition tree_decomposition(const UndirectedGraph& graph);

// Checks that the bags form a tree covering every vertex and every edge, with
// each vertex's bags connected. On failure `why` (if given) names the axiom.
bool is_valid(const TreeDecomposition& td, const UndirectedGraph& graph,
              std::string* why = nullptr);

// {"bags": [[v, ...], ...], "edges": [[i, j], ...]}; throws ParseError.
TreeDecomposition parse_decomposition(std::string_view document);

enum class NodeKind { leaf, introduce_vertex, introduce_edge, forget, join };

struct NiceNode {
  NodeKind kind = NodeKind::leaf;
  std::vector<VertexId> bag;  // sorted
  VertexId vertex = -1;       // introduce_vertex / forget
  Arc edge{-1, -1};           // introduce_edge, first < second
  std::vector<int> children;
};

struct NiceDecomposition {
  std::vector<NiceNode> nodes;
  int root = -1;  // root bag is empty
};

// Leaves and root have empty bags, joins have two children with equal bags,
// and each undirected edge is introduced exactly once, directly below the
// first forget of one of its endpoints. Children precede parents in `nodes`.
NiceDecomposition make_nice(const TreeDecomposition& td,
                            const UndirectedGraph& graph);

// Structural check of the properties listed for make_nice.
bool is_nice(const NiceDecomposition& nice, const UndirectedGraph& graph,
             std::string* why = nullptr);

}  // namespace kex::tw
