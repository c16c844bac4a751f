#include "kex/core.hpp"

#include <algorithm>
#include <set>

#include "kex/errors.hpp"

namespace kex {

namespace {

std::string arc_text(VertexId u, VertexId v) {
  return std::to_string(u) + "->" + std::to_string(v);
}

}  // namespace

CompatibilityGraph::CompatibilityGraph(int n, std::vector<VertexId> altruistic,
                                       std::vector<Arc> arcs)
    : n_(n) {
  if (n < 0) throw ModelError("negative vertex count");
  altruistic_mask_.assign(n, 0);
  for (VertexId b : altruistic) {
    if (b < 0 || b >= n)
      throw ModelError("altruistic id " + std::to_string(b) + " out of range");
    if (altruistic_mask_[b])
      throw ModelError("duplicate altruistic id " + std::to_string(b));
    altruistic_mask_[b] = 1;
  }
  std::sort(altruistic.begin(), altruistic.end());
  altruistic_ = std::move(altruistic);

  out_.assign(n, {});
  in_.assign(n, {});
  for (const auto& [u, v] : arcs) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ModelError("arc " + arc_text(u, v) + ": id out of range");
    if (u == v) throw ModelError("arc " + arc_text(u, v) + ": self-loop");
    if (altruistic_mask_[v])
      throw ModelError("arc " + arc_text(u, v) + ": arc into altruistic");
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
  for (VertexId v = 0; v < n; ++v) {
    std::sort(out_[v].begin(), out_[v].end());
    std::sort(in_[v].begin(), in_[v].end());
    auto dup = std::adjacent_find(out_[v].begin(), out_[v].end());
    if (dup != out_[v].end())
      throw ModelError("arc " + arc_text(v, *dup) + ": duplicate arc");
  }
  num_arcs_ = arcs.size();
}

bool CompatibilityGraph::has_arc(VertexId from, VertexId to) const {
  const auto& list = out_[from];
  return std::binary_search(list.begin(), list.end(), to);
}

std::vector<Arc> CompatibilityGraph::arcs() const {
  std::vector<Arc> result;
  result.reserve(num_arcs_);
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId v : out_[u]) result.emplace_back(u, v);
  return result;
}

int CompatibilityGraph::max_undirected_degree() const {
  int best = 0;
  std::vector<VertexId> merged;
  for (VertexId v = 0; v < n_; ++v) {
    merged.clear();
    std::set_union(out_[v].begin(), out_[v].end(), in_[v].begin(),
                   in_[v].end(), std::back_inserter(merged));
    best = std::max(best, static_cast<int>(merged.size()));
  }
  return best;
}

CompatibilityGraph CompatibilityGraph::induced(
    std::span<const VertexId> keep) const {
  std::vector<VertexId> remap(n_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i)
    remap[keep[i]] = static_cast<VertexId>(i);
  std::vector<VertexId> alt;
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const VertexId old = keep[i];
    if (is_altruistic(old)) alt.push_back(static_cast<VertexId>(i));
    for (VertexId w : out_[old])
      if (remap[w] >= 0) arcs.emplace_back(static_cast<VertexId>(i), remap[w]);
  }
  return CompatibilityGraph(static_cast<int>(keep.size()), std::move(alt),
                            std::move(arcs));
}

Instance::Instance(CompatibilityGraph g, int chain_cap, int cycle_cap,
                   int target)
    : graph(std::move(g)), l_p(chain_cap), l_c(cycle_cap), t(target) {
  if (l_p < 0) throw ModelError("l_p must be non-negative");
  if (l_c < 0) throw ModelError("l_c must be non-negative");
  if (t < 0) throw ModelError("t must be non-negative");
}

Cycle Cycle::canonical(std::vector<VertexId> vertices) {
  auto smallest = std::min_element(vertices.begin(), vertices.end());
  std::rotate(vertices.begin(), smallest, vertices.end());
  return Cycle{std::move(vertices)};
}

void Exchange::add(const Unit& unit) {
  if (unit.kind == UnitKind::chain)
    chains.push_back(Chain{unit.vertices});
  else
    cycles.push_back(Cycle::canonical(unit.vertices));
}

void Exchange::normalize() {
  for (auto& c : cycles) c = Cycle::canonical(std::move(c.vertices));
  std::sort(chains.begin(), chains.end());
  std::sort(cycles.begin(), cycles.end());
}

int exchange_value(const Exchange& ex) {
  int total = 0;
  for (const auto& c : ex.chains) total += c.covered();
  for (const auto& c : ex.cycles) total += c.covered();
  return total;
}

ValidationReport validate_exchange(const Instance& instance,
                                   const Exchange& ex) {
  const auto& g = instance.graph;
  const int n = g.num_vertices();
  ValidationReport report;
  std::vector<std::string> owner(n);

  auto check_unit = [&](const std::string& name,
                        const std::vector<VertexId>& vs, bool closed) {
    auto fail = [&](std::string rule) {
      report.violations.push_back({name, std::move(rule)});
    };
    bool in_range = true;
    for (VertexId v : vs)
      if (v < 0 || v >= n) in_range = false;
    if (!in_range) {
      fail("vertex out of range");
      return;
    }
    std::set<VertexId> seen(vs.begin(), vs.end());
    if (seen.size() != vs.size()) fail("repeated vertex");

    const std::size_t k = vs.size();
    const std::size_t num_edges = closed ? k : (k == 0 ? 0 : k - 1);
    for (std::size_t i = 0; i < num_edges; ++i) {
      const VertexId u = vs[i];
      const VertexId v = vs[(i + 1) % k];
      if (!g.has_arc(u, v)) fail("missing arc " + arc_text(u, v));
    }
    for (VertexId v : seen) {
      if (!owner[v].empty() && owner[v] != name) {
        fail("units not disjoint (vertex " + std::to_string(v) + " also in " +
             owner[v] + ")");
      } else {
        owner[v] = name;
      }
    }
  };

  for (std::size_t i = 0; i < ex.chains.size(); ++i) {
    const std::string name = "chain " + std::to_string(i);
    const auto& vs = ex.chains[i].vertices;
    if (vs.size() < 2) {
      report.violations.push_back({name, "chain has no edge"});
      continue;
    }
    check_unit(name, vs, false);
    if (vs[0] >= 0 && vs[0] < n && !g.is_altruistic(vs[0]))
      report.violations.push_back({name, "chain root not altruistic"});
    for (std::size_t j = 1; j < vs.size(); ++j)
      if (vs[j] >= 0 && vs[j] < n && g.is_altruistic(vs[j]))
        report.violations.push_back({name, "altruistic vertex inside chain"});
    if (ex.chains[i].covered() > instance.l_p)
      report.violations.push_back({name, "chain longer than l_p"});
  }
  for (std::size_t i = 0; i < ex.cycles.size(); ++i) {
    const std::string name = "cycle " + std::to_string(i);
    const auto& vs = ex.cycles[i].vertices;
    if (vs.size() < 2) {
      report.violations.push_back({name, "cycle shorter than 2"});
      continue;
    }
    check_unit(name, vs, true);
    for (VertexId v : vs)
      if (v >= 0 && v < n && g.is_altruistic(v)) {
        report.violations.push_back({name, "altruistic vertex in cycle"});
        break;
      }
    if (ex.cycles[i].covered() > instance.l_c)
      report.violations.push_back({name, "cycle longer than l_c"});
  }
  return report;
}

std::size_t UndirectedGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& list : adj) twice += list.size();
  return twice / 2;
}

std::vector<Arc> UndirectedGraph::edges() const {
  std::vector<Arc> result;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v : adj[u])
      if (u < v) result.emplace_back(u, v);
  return result;
}

bool UndirectedGraph::adjacent(VertexId u, VertexId v) const {
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

UndirectedGraph underlying_undirected(const CompatibilityGraph& g) {
  UndirectedGraph ug;
  ug.n = g.num_vertices();
  ug.adj.assign(ug.n, {});
  for (VertexId v = 0; v < ug.n; ++v) {
    std::set_union(g.out(v).begin(), g.out(v).end(), g.in(v).begin(),
                   g.in(v).end(), std::back_inserter(ug.adj[v]));
  }
  return ug;
}

Instance induced_instance(const Instance& instance,
                          std::span<const VertexId> keep) {
  return Instance(instance.graph.induced(keep), instance.l_p, instance.l_c,
                  instance.t);
}

Exchange lift_exchange(const Exchange& ex, std::span<const VertexId> keep) {
  Exchange lifted;
  for (const auto& c : ex.chains) {
    Chain mapped;
    for (VertexId v : c.vertices) mapped.vertices.push_back(keep[v]);
    lifted.chains.push_back(std::move(mapped));
  }
  for (const auto& c : ex.cycles) {
    std::vector<VertexId> mapped;
    for (VertexId v : c.vertices) mapped.push_back(keep[v]);
    lifted.cycles.push_back(Cycle::canonical(std::move(mapped)));
  }
  return lifted;
}

}  // namespace kex
