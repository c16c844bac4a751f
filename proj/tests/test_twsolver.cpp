#include "doctest.h"
#include "kex/errors.hpp"
#include "kex/oracle.hpp"
#include "kex/twsolver.hpp"
#include "support/generators.hpp"

using namespace kex;
using namespace kex::tw;
using kex::testing::graph;

namespace {

UndirectedGraph undirected(int n, std::vector<Arc> edges) {
  return underlying_undirected(graph(n, {}, std::move(edges)));
}

int count_kind(const NiceDecomposition& nice, NodeKind kind) {
  int c = 0;
  for (const auto& node : nice.nodes) c += node.kind == kind;
  return c;
}

}  // namespace

TEST_CASE("tree_decomposition examples") {
  const auto tree = undirected(6, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {3, 5}});
  const auto td = tree_decomposition(tree);
  CHECK(is_valid(td, tree));
  CHECK(td.width() == 1);

  std::vector<Arc> k4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.emplace_back(i, j);
  const auto clique = undirected(4, k4);
  const auto tdc = tree_decomposition(clique);
  CHECK(is_valid(tdc, clique));
  CHECK(tdc.width() == 3);

  const Instance none(graph(0, {}, {}), 0, 0, 0);
  CHECK(solve_tw(none).feasible);
}

TEST_CASE("tree_decomposition is valid on random graphs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 14, 2, 0, 0, 0, 3.0});
    const auto g = underlying_undirected(inst.graph);
    std::string why;
    CAPTURE(seed);
    CHECK(is_valid(tree_decomposition(g), g, &why));
    CHECK(why.empty());
  }
}

TEST_CASE("is_valid rejects broken decompositions") {
  const auto path = undirected(3, {{0, 1}, {1, 2}});
  std::string why;
  CHECK_FALSE(is_valid(TreeDecomposition{{{0, 1}}, {}}, path, &why));
  CHECK(why.find("in no bag") != std::string::npos);
  CHECK_FALSE(is_valid(TreeDecomposition{{{0, 1}, {2}}, {{0, 1}}}, path, &why));
  CHECK_FALSE(is_valid(TreeDecomposition{{{0, 1}, {2}, {1, 2}}, {{0, 1}, {1, 2}}}, path, &why));
  CHECK(why.find("not connected") != std::string::npos);
  CHECK(is_valid(TreeDecomposition{{{0, 1}, {1, 2}}, {{0, 1}}}, path));
}

TEST_CASE("parse_decomposition") {
  const auto td = parse_decomposition(R"({"bags":[[1,0],[1,2]],"edges":[[0,1]]})");
  CHECK(td.bags[0] == std::vector<VertexId>{0, 1});
  CHECK(td.edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK_THROWS_AS(parse_decomposition("[1]"), ParseError);
  CHECK_THROWS_AS(parse_decomposition(R"({"bags":[[0,0]]})"), ParseError);
}

TEST_CASE("make_nice on a single bag holding a 2-cycle") {
  const Instance inst(graph(2, {}, {{0, 1}, {1, 0}}), 0, 2, 2);
  const auto g = underlying_undirected(inst.graph);
  const NiceDecomposition nice = make_nice(TreeDecomposition{{{0, 1}}, {}}, g);
  CHECK(is_nice(nice, g));
  CHECK(count_kind(nice, NodeKind::leaf) == 1);
  CHECK(count_kind(nice, NodeKind::introduce_vertex) == 2);
  CHECK(count_kind(nice, NodeKind::introduce_edge) == 1);
  CHECK(count_kind(nice, NodeKind::forget) == 2);
  CHECK(count_kind(nice, NodeKind::join) == 0);
  CHECK(nice.nodes[0].kind == NodeKind::leaf);
}

TEST_CASE("make_nice invariants on random graphs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 12, 2, 0, 0, 0, 3.0});
    const auto g = underlying_undirected(inst.graph);
    const auto nice = make_nice(tree_decomposition(g), g);
    std::string why;
    CAPTURE(seed);
    CHECK(is_nice(nice, g, &why));
    CHECK(why.empty());
    CHECK(count_kind(nice, NodeKind::introduce_edge) == static_cast<int>(g.num_edges()));
    for (const auto& node : nice.nodes)
      if (node.kind == NodeKind::join) {
        CHECK(nice.nodes[node.children[0]].bag == node.bag);
        CHECK(nice.nodes[node.children[1]].bag == node.bag);
      }
  }
}

TEST_CASE("make_nice rejects invalid decompositions") {
  const auto path = undirected(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(make_nice(TreeDecomposition{{{0, 1}}, {}}, path), ModelError);
}

TEST_CASE("admissibility predicate") {
  const Instance inst(graph(4, {0}, {{0, 1}, {1, 2}, {2, 1}}), 1, 2, 0);
  DpState s;
  s.blocks.push_back(Block{{1, 2}, {}, true, 2, false, true, true});
  CHECK(admissible(s, inst));
  s.blocks[0].length = 3;
  CHECK_FALSE(admissible(s, inst));  // cycle longer than l_c
  s.blocks[0] = Block{{1}, {}, false, 1, false, false, true};
  CHECK_FALSE(admissible(s, inst));  // start gone without an altruistic root
  s.blocks[0] = Block{{1}, {}, false, 2, true, false, true};
  CHECK_FALSE(admissible(s, inst));  // chain longer than l_p
  s.blocks[0] = Block{{1, 2}, {}, true, 2, true, true, true};
  CHECK_FALSE(admissible(s, inst));  // cycle with an altruistic vertex
  s.blocks[0] = Block{{1, 2, 3}, {}, false, 1, false, true, true};
  CHECK_FALSE(admissible(s, inst));  // fewer edges than the order needs
}

TEST_CASE("dp_solve examples") {
  {
    const Instance inst(graph(2, {}, {{0, 1}, {1, 0}}), 0, 2, 2);
    const auto r = solve_tw(inst);
    CHECK(r.feasible);
    CHECK(r.value == 2);
  }
  {
    const Instance inst(graph(3, {}, {{0, 1}, {1, 2}}), 2, 2, 1);
    const auto r = solve_tw(inst);
    CHECK_FALSE(r.feasible);
    CHECK(r.value == 0);
  }
  {
    const Instance inst(graph(4, {0}, {{0, 1}, {1, 2}, {2, 3}, {3, 1}}), 2, 3, 3);
    const auto r = solve_tw(inst);
    CHECK(r.value == 3);
    CHECK(validate_exchange(inst, *r.exchange).ok());
  }
}

TEST_CASE("dp_solve honours a supplied decomposition") {
  const Instance inst(graph(4, {}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 0, 4, 4);
  Options opt;
  opt.decomposition = TreeDecomposition{{{0, 1, 2, 3}}, {}};
  const auto r = solve_tw(inst, opt);
  CHECK(r.value == 4);
  CHECK(r.stats.at("width") == 3);
  opt.table_cap = 1;
  CHECK_THROWS_AS(solve_tw(inst, opt), CapacityError);
}

TEST_CASE("dp_solve matches the oracle") {
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 8, 2, 4, 4, 4, 2.0});
    const auto r = solve_tw(inst);
    const auto exact = oracle::solve_exact(inst);
    CAPTURE(seed);
    CHECK(r.value == exact.value);
    CHECK(r.feasible == exact.feasible);
    REQUIRE(r.exchange);
    CHECK(validate_exchange(inst, *r.exchange).ok());
    CHECK(exchange_value(*r.exchange) == r.value);
  }
}

TEST_CASE("dp_solve is monotone under arc addition") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {3, 7, 2, 3, 3, 0, 1.5});
    const int base = solve_tw(inst).value;
    const auto& g = inst.graph;
    Rng rng(seed);
    const VertexId u = static_cast<VertexId>(rng.below(g.num_vertices()));
    const VertexId v = static_cast<VertexId>(rng.below(g.num_vertices()));
    if (u == v || g.is_altruistic(v) || g.has_arc(u, v)) continue;
    auto arcs = g.arcs();
    arcs.emplace_back(u, v);
    const Instance more(CompatibilityGraph(g.num_vertices(), g.altruistic(), arcs),
                        inst.l_p, inst.l_c, inst.t);
    CAPTURE(seed);
    CHECK(solve_tw(more).value >= base);
  }
}

TEST_CASE("join order does not change the value") {
  // Star-shaped decomposition forces joins; swapping child order must agree.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {4, 8, 2, 3, 3, 0, 2.0});
    const auto g = underlying_undirected(inst.graph);
    TreeDecomposition td = tree_decomposition(g);
    auto nice = make_nice(td, g);
    const int a = dp_solve(inst, nice).value;
    for (auto& node : nice.nodes)
      if (node.kind == NodeKind::join) std::swap(node.children[0], node.children[1]);
    CAPTURE(seed);
    CHECK(dp_solve(inst, nice).value == a);
  }
}
