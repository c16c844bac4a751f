#include <set>

#include "doctest.h"
#include "kex/approx3.hpp"
#include "kex/errors.hpp"
#include "kex/oracle.hpp"
#include "support/brute.hpp"
#include "support/generators.hpp"

using namespace kex;
using namespace kex::approx;
using kex::testing::graph;

TEST_CASE("enumerate_small_cycles examples") {
  const auto g = graph(4, {}, {{0, 1}, {1, 0}, {1, 2}, {2, 0}, {0, 2}, {2, 1}, {2, 3}});
  const auto sc = enumerate_small_cycles(g);
  CHECK(sc.two == std::vector<Cycle>{{{0, 1}}, {{0, 2}}, {{1, 2}}});
  // 0->1->2->0 and 0->2->1->0 share a vertex set; one representative kept
  REQUIRE(sc.three.size() == 1);
  CHECK(sc.three[0] == Cycle{{0, 1, 2}});
}

TEST_CASE("enumerate_small_cycles agrees with brute enumeration") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = kex::testing::random_instance(seed, {1, 8, 0, 0, 3, 0, 3.0});
    const Instance capped(inst.graph, 0, 3, 0);
    std::set<std::vector<VertexId>> twos, threes;
    for (const auto& u : kex::testing::brute_units(capped)) {
      if (!u.cycle) continue;
      auto key = u.seq;
      std::sort(key.begin(), key.end());
      (u.seq.size() == 2 ? twos : threes).insert(key);
    }
    const auto sc = enumerate_small_cycles(inst.graph);
    CAPTURE(seed);
    CHECK(sc.two.size() == twos.size());
    CHECK(sc.three.size() == threes.size());
    for (const auto& c : sc.three) CHECK(c == Cycle::canonical(c.vertices));
  }
}

TEST_CASE("set_packing examples") {
  PackingInstance pi;
  pi.sets = {{0, 1, 2}, {0, 3}, {1, 4}, {2, 5}};
  pi.source.resize(4);
  CHECK(set_packing(pi, {}) == std::vector<std::size_t>{1, 2, 3});
  PackingOptions swap;
  swap.mode = PackingMode::local_search;
  swap.swap_width = 1;
  CHECK(set_packing(pi, swap).size() == 3);
  PackingOptions opt;
  opt.family_cap = 3;
  CHECK_THROWS_AS(set_packing(pi, opt), CapacityError);
  PackingInstance empty;
  CHECK(set_packing(empty, {}).empty());
}

TEST_CASE("exact packing dominates local search") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    PackingInstance pi;
    const int universe = 4 + static_cast<int>(rng.below(9));
    const int count = static_cast<int>(rng.below(15));
    for (int i = 0; i < count; ++i) {
      std::set<VertexId> s;
      const int size = 2 + static_cast<int>(rng.below(2));
      while (static_cast<int>(s.size()) < size)
        s.insert(static_cast<VertexId>(rng.below(universe)));
      pi.sets.emplace_back(s.begin(), s.end());
    }
    pi.source.resize(pi.sets.size());
    const auto exact = set_packing(pi, {});
    for (int w = 0; w <= 2; ++w) {
      PackingOptions opt;
      opt.mode = PackingMode::local_search;
      opt.swap_width = w;
      const auto local = set_packing(pi, opt);
      std::vector<char> used(universe, 0);
      for (std::size_t i : local)
        for (VertexId v : pi.sets[i]) {
          CHECK_FALSE(used[v]);
          used[v] = 1;
        }
      CAPTURE(seed);
      CHECK(local.size() <= exact.size());
      // maximal: every unpicked set hits a used element
      for (std::size_t i = 0; i < pi.sets.size(); ++i) {
        bool hit = false;
        for (VertexId v : pi.sets[i]) hit = hit || used[v];
        CHECK(hit);
      }
    }
  }
}

TEST_CASE("solve_approx3 examples") {
  {
    const Instance inst(graph(5, {}, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 3}}), 0, 3, 5);
    const auto r = solve_approx3(inst);
    CHECK(r.value == 5);
    CHECK(r.feasible);
    CHECK(r.stats.at("a1") == 3);
    CHECK(r.stats.at("a2") == 5);
    CHECK(oracle::solve_exact(inst).value == 5);
  }
  {
    const Instance inst(
        graph(6, {}, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {2, 3}}), 0, 3, 6);
    const auto r = solve_approx3(inst);
    CHECK(r.stats.at("a1") == r.stats.at("a2"));
    CHECK(r.value == oracle::solve_exact(inst).value);
  }
  {
    const Instance inst(graph(2, {}, {{0, 1}, {1, 0}}), 1, 3, 1);
    CHECK_THROWS_AS(solve_approx3(inst), PreconditionError);
    CHECK_THROWS_AS(solve_approx3(Instance(inst.graph, 0, 4, 1)), PreconditionError);
  }
  {
    const Instance inst(graph(3, {}, {{0, 1}, {1, 0}, {1, 2}, {2, 0}}), 0, 2, 2);
    const auto r = solve_approx3(inst);
    CHECK(r.value == 2);
    CHECK(r.stats.at("family1") == 0);
  }
}

TEST_CASE("solve_approx3 ratio and validity") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance base = kex::testing::random_instance(seed, {2, 8, 0, 0, 0, 6, 2.5});
    const Instance inst(base.graph, 0, 3, base.t);
    const auto r = solve_approx3(inst);
    const int opt = kex::testing::brute_value(inst);
    CAPTURE(seed);
    REQUIRE(r.exchange);
    CHECK(validate_exchange(inst, *r.exchange).ok());
    CHECK(r.exchange->chains.empty());
    CHECK(exchange_value(*r.exchange) == r.value);
    CHECK(r.value == std::max(r.stats.at("a1"), r.stats.at("a2")));
    CHECK(4 * r.value >= 3 * opt);
    CHECK(r.value <= opt);
    PackingOptions local;
    local.mode = PackingMode::local_search;
    const auto rl = solve_approx3(inst, local);
    CHECK(validate_exchange(inst, *rl.exchange).ok());
    CHECK(rl.value <= r.value);
    CHECK(rl.stats.at("alpha") == 2);
  }
}
