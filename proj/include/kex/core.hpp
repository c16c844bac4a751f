#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kex {

using VertexId = std::int32_t;
using Arc = std::pair<VertexId, VertexId>;

// Directed compatibility graph with a distinguished set of altruistic donors.
//
// Invariants enforced at construction (ModelError otherwise):
//   - ids in [0, n), no self-loops, no duplicate arcs;
//   - no arc has an altruistic head.
// Adjacency lists are sorted ascending. Immutable after construction.
class CompatibilityGraph {
 public:
  CompatibilityGraph() = default;
  CompatibilityGraph(int n, std::vector<VertexId> altruistic,
                     std::vector<Arc> arcs);

  int num_vertices() const { return n_; }
  std::size_t num_arcs() const { return num_arcs_; }

  bool is_altruistic(VertexId v) const { return altruistic_mask_[v] != 0; }
  const std::vector<VertexId>& altruistic() const { return altruistic_; }

  std::span<const VertexId> out(VertexId v) const { return out_[v]; }
  std::span<const VertexId> in(VertexId v) const { return in_[v]; }
  bool has_arc(VertexId from, VertexId to) const;

  // All arcs, sorted by (tail, head).
  std::vector<Arc> arcs() const;

  // Maximum degree of the underlying undirected graph (Δ).
  int max_undirected_degree() const;

  // Subgraph induced by `keep` (must be sorted, duplicate-free). Vertex
  // keep[i] becomes vertex i of the result.
  CompatibilityGraph induced(std::span<const VertexId> keep) const;

  friend bool operator==(const CompatibilityGraph& a,
                         const CompatibilityGraph& b) {
    return a.n_ == b.n_ && a.altruistic_ == b.altruistic_ && a.out_ == b.out_;
  }

 private:
  int n_ = 0;
  std::size_t num_arcs_ = 0;
  std::vector<VertexId> altruistic_;
  std::vector<char> altruistic_mask_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
};

// A clearing instance: graph, chain cap l_p and cycle cap l_c (both counted
// in edges) and the target number of covered patients t.
struct Instance {
  CompatibilityGraph graph;
  int l_p = 0;
  int l_c = 0;
  int t = 0;

  Instance() = default;
  Instance(CompatibilityGraph g, int chain_cap, int cycle_cap, int target);

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Chain v0 -> v1 -> ... -> vk rooted at an altruistic donor; covers k patients.
struct Chain {
  std::vector<VertexId> vertices;

  int covered() const { return static_cast<int>(vertices.size()) - 1; }
  friend auto operator<=>(const Chain&, const Chain&) = default;
};

// Cycle v0 -> ... -> v(k-1) -> v0; stored rotated so v0 is the minimum id.
struct Cycle {
  std::vector<VertexId> vertices;

  // Rotates `vertices` so the minimum id comes first.
  static Cycle canonical(std::vector<VertexId> vertices);

  int covered() const { return static_cast<int>(vertices.size()); }
  friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

enum class UnitKind : std::uint8_t { chain, cycle };

// Either a chain or a cycle, used where solvers handle both uniformly.
struct Unit {
  UnitKind kind = UnitKind::chain;
  std::vector<VertexId> vertices;

  int covered() const {
    const int k = static_cast<int>(vertices.size());
    return kind == UnitKind::chain ? k - 1 : k;
  }
  friend auto operator<=>(const Unit&, const Unit&) = default;
};

struct Exchange {
  std::vector<Chain> chains;
  std::vector<Cycle> cycles;

  void add(const Unit& unit);
  bool empty() const { return chains.empty() && cycles.empty(); }

  // Sorts chains and cycles so equal exchanges compare equal.
  void normalize();

  friend bool operator==(const Exchange&, const Exchange&) = default;
};

// Number of patients covered: sum of chain edge counts plus cycle lengths.
int exchange_value(const Exchange& ex);

struct Violation {
  std::string unit;  // e.g. "chain 0", "cycle 2"
  std::string rule;  // e.g. "chain root not altruistic"
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every chain/cycle invariant against `instance` plus pairwise
// disjointness. Violations are reported, never thrown.
ValidationReport validate_exchange(const Instance& instance,
                                   const Exchange& ex);

// Symmetric simple graph: {u,v} present iff (u,v) or (v,u) is an arc.
struct UndirectedGraph {
  int n = 0;
  std::vector<std::vector<VertexId>> adj;  // sorted

  std::size_t num_edges() const;
  // Edges as (u, v) with u < v, sorted.
  std::vector<Arc> edges() const;
  bool adjacent(VertexId u, VertexId v) const;
};

UndirectedGraph underlying_undirected(const CompatibilityGraph& g);

// Restricts an instance to `keep` (sorted); caps and target carried over.
Instance induced_instance(const Instance& instance,
                          std::span<const VertexId> keep);

// Maps an exchange on an induced instance back to original ids.
Exchange lift_exchange(const Exchange& ex, std::span<const VertexId> keep);

}  // namespace kex
