#include "doctest.h"
#include "kex/errors.hpp"
#include "kex/oracle.hpp"
#include "kex/typesolver.hpp"
#include "support/generators.hpp"

using namespace kex;
using namespace kex::types;
using kex::testing::graph;

TEST_CASE("compute_types examples") {
  {
    const auto p = compute_types(graph(4, {}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
    CHECK(p.type_of[1] == p.type_of[2]);
    CHECK(p.theta() == 3);
  }
  {
    const auto p = compute_types(graph(3, {}, {}));
    CHECK(p.theta() == 1);
    CHECK(p.size(0) == 3);
  }
  {
    const auto p = compute_types(graph(3, {}, {{0, 1}, {1, 2}}));
    CHECK(p.theta() == 3);
  }
}

TEST_CASE("type classes are independent and adjacency is all-or-nothing") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 10, 3, 0, 0, 0, 4.0});
    const auto& g = inst.graph;
    const auto p = compute_types(g);
    for (int c = 0; c < p.theta(); ++c)
      for (int d = 0; d < p.theta(); ++d)
        for (VertexId u : p.classes[c])
          for (VertexId v : p.classes[d])
            CHECK(g.has_arc(u, v) == static_cast<bool>(p.class_adj[c][d]));
    for (VertexId u = 0; u < g.num_vertices(); ++u)
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const bool same = std::ranges::equal(g.in(u), g.in(v)) &&
                          std::ranges::equal(g.out(u), g.out(v));
        CHECK(same == (p.type_of[u] == p.type_of[v]));
      }
  }
}

TEST_CASE("prune_mixed_types examples") {
  const Instance mixed(graph(3, {0}, {{0, 2}, {1, 2}}), 1, 2, 0);
  const auto p = compute_types(mixed.graph);
  CHECK(p.type_of[0] == p.type_of[1]);
  const auto pruned = prune_mixed_types(mixed, p);
  CHECK(pruned.kept == std::vector<VertexId>{0, 2});

  const Instance plain(graph(3, {0}, {{0, 1}, {1, 2}}), 1, 2, 0);
  CHECK(prune_mixed_types(plain, compute_types(plain.graph)).instance == plain);
}

TEST_CASE("pruning mixed classes keeps the optimum") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 8, 3, 4, 4, 0, 2.0});
    const auto pruned = prune_mixed_types(inst, compute_types(inst.graph));
    CAPTURE(seed);
    CHECK(oracle::solve_exact(pruned.instance).value == oracle::solve_exact(inst).value);
  }
}

TEST_CASE("enumerate_signatures examples") {
  {
    // Altruistic class {0}, class {1,2}; only arcs from 0 into {1,2}.
    const Instance inst(graph(3, {0}, {{0, 1}, {0, 2}}), 2, 3, 0);
    const auto p = compute_types(inst.graph);
    REQUIRE(p.theta() == 2);
    const auto sigs = enumerate_signatures(inst, p);
    REQUIRE(sigs.size() == 1);
    CHECK(sigs[0].kind == UnitKind::chain);
    CHECK(sigs[0].seq == std::vector<int>{p.type_of[0], p.type_of[1]});

    const IlpModel m = build_ilp(sigs, p);
    REQUIRE(m.objective.size() == 1);
    CHECK(m.objective[0] == 1);
    CHECK(m.upper[0] == 1);
    CHECK(m.usage[0][p.type_of[0]] == 1);
    CHECK(m.capacity[p.type_of[0]] == 1);

    const IlpSolution sol = solve_ilp(m);
    CHECK(sol.objective == 1);
    CHECK(sol.x == std::vector<int>{1});
    const Exchange ex = reconstruct(sigs, sol.x, inst, p);
    REQUIRE(ex.chains.size() == 1);
    CHECK(ex.chains[0].vertices == std::vector<VertexId>{0, 1});
    CHECK(reconstruct(sigs, {0}, inst, p).empty());
  }
  {
    const Instance inst(graph(2, {}, {{0, 1}, {1, 0}}), 0, 2, 0);
    const auto p = compute_types(inst.graph);
    const auto sigs = enumerate_signatures(inst, p);
    REQUIRE(sigs.size() == 1);
    CHECK(sigs[0].kind == UnitKind::cycle);
    CHECK(sigs[0].seq == std::vector<int>{0, 1});
  }
  {
    // Classes {0,1} (out to 2,3,4) ... a 4-cycle through two classes of size
    // two is allowed; a cycle needing three vertices of one class is not.
    const Instance inst(graph(4, {}, {{0, 2}, {0, 3}, {1, 2}, {1, 3},
                                      {2, 0}, {2, 1}, {3, 0}, {3, 1}}),
                        0, 6, 0);
    const auto p = compute_types(inst.graph);
    REQUIRE(p.theta() == 2);
    const auto sigs = enumerate_signatures(inst, p);
    for (const auto& s : sigs) CHECK(s.seq.size() <= 4);
    CHECK(sigs.size() == 2);
  }
}

TEST_CASE("build_ilp counts class multiplicities") {
  // Classes A = {0} altruistic, B = {1,2}, C = {3}; arcs A->B, B->C, C->B.
  const Instance inst(graph(4, {0}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 1}, {3, 2}}), 3, 3,
                      0);
  const auto p = compute_types(inst.graph);
  REQUIRE(p.theta() == 3);
  const auto sigs = enumerate_signatures(inst, p);
  const IlpModel m = build_ilp(sigs, p);
  CHECK(sigs.size() == 4);  // AB, ABC, ABCB, cycle BC
  for (std::size_t j = 0; j < sigs.size(); ++j) {
    std::vector<int> count(p.theta(), 0);
    for (int c : sigs[j].seq) ++count[c];
    CHECK(m.usage[j] == count);
    CHECK(m.objective[j] == sigs[j].covered());
  }
  CHECK(build_ilp({}, p).objective.empty());
  CHECK(solve_ilp(build_ilp({}, p)).objective == 0);
}

TEST_CASE("solve_ilp examples") {
  IlpModel one{{1}, {{1}}, {1}, {1}};
  CHECK(solve_ilp(one).objective == 1);
  IlpModel compete{{2, 3}, {{1}, {1}}, {1}, {1, 1}};
  const auto s = solve_ilp(compete);
  CHECK(s.objective == 3);
  CHECK(s.x == std::vector<int>{0, 1});
  IlpModel tie{{2, 2}, {{1}, {1}}, {1}, {1, 1}};
  CHECK(solve_ilp(tie).x == std::vector<int>{0, 1});
  CHECK_THROWS_AS(solve_ilp(compete, 1), CapacityError);
}

TEST_CASE("solve_ilp matches exhaustive search on small models") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    const int vars = 1 + static_cast<int>(rng.below(4));
    const int classes = 1 + static_cast<int>(rng.below(3));
    IlpModel m;
    for (int c = 0; c < classes; ++c) m.capacity.push_back(static_cast<int>(rng.below(5)));
    for (int j = 0; j < vars; ++j) {
      m.objective.push_back(static_cast<int>(rng.below(5)));
      std::vector<int> use;
      for (int c = 0; c < classes; ++c) use.push_back(static_cast<int>(rng.below(3)));
      m.usage.push_back(use);
      m.upper.push_back(static_cast<int>(rng.below(4)));
    }
    int best = -1;
    std::vector<int> best_x, x(vars, 0);
    auto rec = [&](auto&& self, int j) -> void {
      if (j == vars) {
        for (int c = 0; c < classes; ++c) {
          int used = 0;
          for (int k = 0; k < vars; ++k) used += m.usage[k][c] * x[k];
          if (used > m.capacity[c]) return;
        }
        int value = 0;
        for (int k = 0; k < vars; ++k) value += m.objective[k] * x[k];
        if (value > best) best = value, best_x = x;
        return;
      }
      for (int v = 0; v <= m.upper[j]; ++v) {
        x[j] = v;
        self(self, j + 1);
      }
      x[j] = 0;
    };
    rec(rec, 0);
    const auto s = solve_ilp(m);
    CAPTURE(seed);
    CHECK(s.objective == best);
    CHECK(s.x == best_x);
  }
}

TEST_CASE("solve_types precondition and trivial target") {
  const Instance bad(graph(2, {}, {{0, 1}, {1, 0}}), 3, 2, 0);
  CHECK_THROWS_WITH_AS(solve_types(bad), doctest::Contains("requires l_p <= l_c"),
                       PreconditionError);
  const auto r = solve_types(Instance(graph(2, {}, {}), 0, 0, 0));
  CHECK(r.feasible);
  CHECK(r.value == 0);
}

TEST_CASE("solve_types matches the oracle when l_p <= l_c") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = kex::testing::random_instance(seed, {1, 8, 2, 4, 4, 4, 2.5});
    if (inst.l_p > inst.l_c) inst = Instance(inst.graph, inst.l_c, inst.l_p, inst.t);
    const auto r = solve_types(inst);
    CAPTURE(seed);
    CHECK(r.value == oracle::solve_exact(inst).value);
    REQUIRE(r.exchange);
    CHECK(validate_exchange(inst, *r.exchange).ok());
    CHECK(exchange_value(*r.exchange) == r.value);
  }
}

TEST_CASE("capping unit lengths at theta + 3 keeps the optimum") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = kex::testing::random_instance(seed, {1, 8, 2, 8, 8, 0, 2.0});
    if (inst.l_p > inst.l_c) inst = Instance(inst.graph, inst.l_c, inst.l_p, 0);
    const int cap = compute_types(inst.graph).theta() + 3;
    const Instance capped(inst.graph, std::min(inst.l_p, cap), std::min(inst.l_c, cap), 0);
    CAPTURE(seed);
    CHECK(oracle::solve_exact(capped).value == oracle::solve_exact(inst).value);
  }
}
