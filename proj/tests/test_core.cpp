#include <set>

#include "doctest.h"
#include "kex/core.hpp"
#include "kex/errors.hpp"
#include "support/generators.hpp"

using namespace kex;
using kex::testing::graph;

namespace {

bool has_rule(const ValidationReport& r, const std::string& rule) {
  for (const auto& v : r.violations)
    if (v.rule.find(rule) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("graph construction rejects illegal arcs") {
  CHECK_THROWS_AS(graph(2, {}, {{0, 0}}), ModelError);
  CHECK_THROWS_AS(graph(2, {0}, {{1, 0}}), ModelError);
  CHECK_THROWS_AS(graph(2, {}, {{0, 2}}), ModelError);
  CHECK_THROWS_AS(graph(2, {}, {{0, 1}, {0, 1}}), ModelError);
  CHECK_THROWS_AS(graph(2, {0, 0}, {}), ModelError);
  CHECK_THROWS_WITH_AS(graph(3, {1}, {{0, 1}}), doctest::Contains("arc into altruistic"),
                       ModelError);
  CHECK_THROWS_WITH_AS(graph(3, {}, {{2, 2}}), doctest::Contains("self-loop"),
                       ModelError);
}

TEST_CASE("graph adjacency is sorted and consistent") {
  const auto g = graph(4, {0}, {{0, 3}, {0, 1}, {3, 1}, {1, 2}});
  CHECK(g.num_arcs() == 4);
  CHECK(std::vector<VertexId>(g.out(0).begin(), g.out(0).end()) ==
        std::vector<VertexId>{1, 3});
  CHECK(std::vector<VertexId>(g.in(1).begin(), g.in(1).end()) ==
        std::vector<VertexId>{0, 3});
  CHECK(g.has_arc(3, 1));
  CHECK_FALSE(g.has_arc(1, 3));
  CHECK(g.max_undirected_degree() == 3);
}

TEST_CASE("instance caps must be non-negative") {
  CHECK_THROWS_AS(Instance(graph(1, {}, {}), -1, 0, 0), ModelError);
  CHECK_THROWS_AS(Instance(graph(1, {}, {}), 0, -1, 0), ModelError);
  CHECK_THROWS_AS(Instance(graph(1, {}, {}), 0, 0, -1), ModelError);
}

TEST_CASE("validate_exchange accepts the minimal cycle") {
  const Instance inst(graph(3, {}, {{1, 2}, {2, 1}}), 0, 2, 2);
  Exchange ex;
  ex.cycles.push_back(Cycle{{1, 2}});
  CHECK(validate_exchange(inst, ex).ok());
}

TEST_CASE("validate_exchange names the failing rule") {
  const Instance inst(graph(6, {5}, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 2},
                                     {5, 0}, {0, 3}, {3, 4}, {4, 3}}),
                      1, 3, 0);
  SUBCASE("chain root not altruistic") {
    Exchange ex;
    ex.chains.push_back(Chain{{0, 1}});
    CHECK(has_rule(validate_exchange(inst, ex), "chain root not altruistic"));
  }
  SUBCASE("units not disjoint") {
    Exchange ex;
    ex.cycles.push_back(Cycle{{2, 3}});
    ex.cycles.push_back(Cycle{{3, 4}});
    CHECK(has_rule(validate_exchange(inst, ex), "units not disjoint"));
  }
  SUBCASE("missing arc") {
    Exchange ex;
    ex.cycles.push_back(Cycle{{0, 2, 1}});
    CHECK(has_rule(validate_exchange(inst, ex), "missing arc"));
  }
  SUBCASE("length caps") {
    Exchange ex;
    ex.chains.push_back(Chain{{5, 0, 1}});
    CHECK(has_rule(validate_exchange(inst, ex), "chain longer than l_p"));
    const Instance tight(inst.graph, 1, 2, 0);
    Exchange cyc;
    cyc.cycles.push_back(Cycle{{0, 1, 2}});
    CHECK(has_rule(validate_exchange(tight, cyc), "cycle longer than l_c"));
  }
  SUBCASE("degenerate units") {
    Exchange ex;
    ex.chains.push_back(Chain{{5}});
    ex.cycles.push_back(Cycle{{4}});
    const auto r = validate_exchange(inst, ex);
    CHECK(has_rule(r, "chain has no edge"));
    CHECK(has_rule(r, "cycle shorter than 2"));
  }
  SUBCASE("repeated vertex and range") {
    Exchange ex;
    ex.cycles.push_back(Cycle{{2, 3, 2, 3}});
    ex.chains.push_back(Chain{{5, 9}});
    const auto r = validate_exchange(inst, ex);
    CHECK(has_rule(r, "repeated vertex"));
    CHECK(has_rule(r, "vertex out of range"));
  }
}

TEST_CASE("exchange_value sums edges of chains and lengths of cycles") {
  CHECK(exchange_value(Exchange{}) == 0);
  Exchange one;
  one.chains.push_back(Chain{{0, 1, 2}});
  CHECK(exchange_value(one) == 2);
  Exchange two;
  two.chains.push_back(Chain{{0, 1}});
  two.cycles.push_back(Cycle{{2, 3, 4}});
  CHECK(exchange_value(two) == 4);
}

TEST_CASE("cycles are rotated to their smallest vertex") {
  CHECK(Cycle::canonical({4, 2, 7}).vertices == std::vector<VertexId>{2, 7, 4});
  Exchange ex;
  ex.add(Unit{UnitKind::cycle, {9, 3, 5}});
  CHECK(ex.cycles[0].vertices == std::vector<VertexId>{3, 5, 9});
}

TEST_CASE("underlying undirected graph collapses antiparallel arcs") {
  CHECK(underlying_undirected(graph(3, {}, {{1, 2}, {2, 1}})).edges() ==
        std::vector<Arc>{{1, 2}});
  CHECK(underlying_undirected(graph(3, {}, {})).num_edges() == 0);
  CHECK(underlying_undirected(graph(3, {}, {{0, 1}, {1, 2}})).edges() ==
        std::vector<Arc>{{0, 1}, {1, 2}});
}

TEST_CASE("property: accepted exchanges cover disjoint non-altruistic sets") {
  // Random unit lists; whenever validation passes, the value equals the
  // number of distinct non-altruistic vertices touched.
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {2, 7, 2, 3, 3, 0, 3.0});
    Rng rng(seed);
    Exchange ex;
    const int units = static_cast<int>(rng.below(3));
    for (int u = 0; u < units; ++u) {
      std::vector<VertexId> seq;
      const int len = 2 + static_cast<int>(rng.below(3));
      for (int i = 0; i < len; ++i)
        seq.push_back(static_cast<VertexId>(rng.below(inst.graph.num_vertices())));
      if (rng.below(2)) ex.chains.push_back(Chain{seq});
      else ex.cycles.push_back(Cycle{seq});
    }
    if (!validate_exchange(inst, ex).ok()) continue;
    std::set<VertexId> covered;
    int count = 0;
    for (const auto& c : ex.chains)
      for (VertexId v : c.vertices) {
        CHECK(covered.insert(v).second);
        if (!inst.graph.is_altruistic(v)) ++count;
      }
    for (const auto& c : ex.cycles)
      for (VertexId v : c.vertices) {
        CHECK(covered.insert(v).second);
        CHECK_FALSE(inst.graph.is_altruistic(v));
        ++count;
      }
    CHECK(exchange_value(ex) == count);
  }
}

TEST_CASE("induced subgraph and lifting") {
  const auto g = graph(5, {0}, {{0, 2}, {2, 4}, {4, 2}, {1, 3}});
  const std::vector<VertexId> keep{0, 2, 4};
  const Instance inst(g, 2, 2, 1);
  const Instance sub = induced_instance(inst, keep);
  CHECK(sub.graph.num_vertices() == 3);
  CHECK(sub.graph.arcs() == std::vector<Arc>{{0, 1}, {1, 2}, {2, 1}});
  Exchange ex;
  ex.cycles.push_back(Cycle{{1, 2}});
  CHECK(lift_exchange(ex, keep).cycles[0].vertices == std::vector<VertexId>{2, 4});
}
