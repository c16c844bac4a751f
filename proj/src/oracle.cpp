#include "kex/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <string>

#include "kex/errors.hpp"

namespace kex::oracle {

namespace {

std::uint64_t mask_of(const std::vector<VertexId>& vertices) {
  std::uint64_t m = 0;
  for (VertexId v : vertices) m |= std::uint64_t{1} << v;
  return m;
}

class Enumerator {
 public:
  Enumerator(const Instance& instance, std::size_t cap)
      : g_(instance.graph), inst_(instance), cap_(cap) {}

  std::vector<Unit> run() {
    for (VertexId b : g_.altruistic()) {
      path_ = {b};
      chains_from(b);
    }
    for (VertexId s = 0; s < g_.num_vertices(); ++s) {
      if (g_.is_altruistic(s) || inst_.l_c < 2) continue;
      path_ = {s};
      cycles_from(s, s);
    }
    return std::move(units_);
  }

 private:
  void push(UnitKind kind) {
    if (units_.size() >= cap_)
      throw CapacityError("oracle: more than " + std::to_string(cap_) +
                          " units");
    units_.push_back(Unit{kind, path_});
  }

  bool on_path(VertexId v) const {
    return std::find(path_.begin(), path_.end(), v) != path_.end();
  }

  void chains_from(VertexId v) {
    if (static_cast<int>(path_.size()) - 1 >= inst_.l_p) return;
    for (VertexId w : g_.out(v)) {
      if (on_path(w)) continue;
      path_.push_back(w);
      push(UnitKind::chain);
      chains_from(w);
      path_.pop_back();
    }
  }

  void cycles_from(VertexId start, VertexId v) {
    const int len = static_cast<int>(path_.size());
    for (VertexId w : g_.out(v)) {
      if (w == start) {
        if (len >= 2) push(UnitKind::cycle);
        continue;
      }
      if (w < start || len >= inst_.l_c || on_path(w)) continue;
      path_.push_back(w);
      cycles_from(start, w);
      path_.pop_back();
    }
  }

  const CompatibilityGraph& g_;
  const Instance& inst_;
  std::size_t cap_;
  std::vector<VertexId> path_;
  std::vector<Unit> units_;
};

class Search {
 public:
  Search(const UnitCatalog& catalog, std::uint64_t patients)
      : cat_(catalog), patients_(patients) {}

  void run() {
    std::vector<std::size_t> all(cat_.units.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    visit(all, 0, 0);
  }

  int best = -1;
  std::vector<std::size_t> best_set;
  std::uint64_t nodes = 0;

 private:
  void visit(const std::vector<std::size_t>& cands, std::uint64_t used,
             int value) {
    ++nodes;
    if (value > best) {
      best = value;
      best_set = chosen_;
    }
    int sum = 0;
    std::uint64_t reach = 0;
    for (std::size_t j : cands) {
      sum += cat_.units[j].covered();
      reach |= cat_.masks[j];
    }
    const int room = std::popcount(reach & patients_ & ~used);
    if (value + std::min(sum, room) <= best) return;

    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      const std::size_t j = cands[k];
      const std::uint64_t m = cat_.masks[j];
      next.clear();
      for (std::size_t r = k + 1; r < cands.size(); ++r)
        if ((cat_.masks[cands[r]] & m) == 0) next.push_back(cands[r]);
      chosen_.push_back(j);
      visit(next, used | m, value + cat_.units[j].covered());
      chosen_.pop_back();
    }
  }

  const UnitCatalog& cat_;
  std::uint64_t patients_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

UnitCatalog make_catalog(std::vector<Unit> units) {
  UnitCatalog catalog;
  catalog.masks.reserve(units.size());
  for (const Unit& u : units) {
    for (VertexId v : u.vertices)
      if (v < 0 || v >= 64)
        throw CapacityError("oracle: vertex ids must be below 64");
    catalog.masks.push_back(mask_of(u.vertices));
  }
  catalog.units = std::move(units);
  return catalog;
}

UnitCatalog enumerate_units(const Instance& instance, std::size_t unit_cap) {
  if (instance.graph.num_vertices() > 64)
    throw CapacityError("oracle: supports at most 64 vertices, got " +
                        std::to_string(instance.graph.num_vertices()));
  std::vector<Unit> units = Enumerator(instance, unit_cap).run();
  std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
    if (a.covered() != b.covered()) return a.covered() > b.covered();
    return a < b;
  });
  return make_catalog(std::move(units));
}

Cover max_disjoint_cover(const UnitCatalog& catalog, const Instance& instance) {
  std::uint64_t patients = 0;
  const int n = std::min(instance.graph.num_vertices(), 64);
  for (VertexId v = 0; v < n; ++v)
    if (!instance.graph.is_altruistic(v)) patients |= std::uint64_t{1} << v;

  Search search(catalog, patients);
  search.run();

  Cover cover;
  cover.value = search.best;
  cover.selected = search.best_set;
  for (std::size_t j : cover.selected) cover.exchange.add(catalog.units[j]);
  return cover;
}

SolveResult solve_exact(const Instance& instance, std::size_t unit_cap) {
  const auto start = std::chrono::steady_clock::now();
  const UnitCatalog catalog = enumerate_units(instance, unit_cap);
  Cover cover = max_disjoint_cover(catalog, instance);

  SolveResult result;
  result.algorithm = "brute";
  result.value = cover.value;
  result.feasible = cover.value >= instance.t;
  cover.exchange.normalize();
  result.exchange = std::move(cover.exchange);
  result.stats["units"] = static_cast<double>(catalog.units.size());
  result.stats["runtime_ms"] =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace kex::oracle
