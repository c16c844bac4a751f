#include "kex/kernel.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace kex::kernel {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// Out-BFS distances from `sources` inside the alive vertex set.
std::vector<int> bfs(const CompatibilityGraph& g,
                     const std::vector<VertexId>& sources,
                     const std::vector<char>& alive) {
  std::vector<int> dist(g.num_vertices(), kUnreached);
  std::queue<VertexId> q;
  for (VertexId s : sources) {
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    const VertexId v = q.front();
    q.pop();
    for (VertexId w : g.out(v))
      if (alive[w] && dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  return dist;
}

// Length of the shortest cycle through v among alive vertices.
int shortest_cycle_through(const CompatibilityGraph& g, VertexId v,
                           const std::vector<char>& alive) {
  const std::vector<int> dist = bfs(g, {v}, alive);
  int best = kUnreached;
  for (VertexId u : g.in(v))
    if (alive[u] && dist[u] != kUnreached) best = std::min(best, dist[u] + 1);
  return best;
}

bool cycle_of_length(const CompatibilityGraph& g, VertexId start, VertexId v,
                     int len, const std::vector<char>& alive,
                     std::vector<char>& on, std::vector<VertexId>& path) {
  path.push_back(v);
  on[v] = 1;
  const int size = static_cast<int>(path.size());
  for (VertexId w : g.out(v)) {
    if (w == start && size == len) return true;
    if (size < len && w > start && alive[w] && !on[w] &&
        cycle_of_length(g, start, w, len, alive, on, path))
      return true;
  }
  on[v] = 0;
  path.pop_back();
  return false;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

}  // namespace

std::vector<VertexId> removable_vertices(const Instance& instance) {
  const CompatibilityGraph& g = instance.graph;
  const int n = g.num_vertices();
  const std::vector<char> alive(n, 1);
  const std::vector<int> from_b = bfs(g, g.altruistic(), alive);
  std::vector<VertexId> removable;
  for (VertexId v = 0; v < n; ++v) {
    bool used;
    if (g.is_altruistic(v)) {
      used = instance.l_p >= 1 && !g.out(v).empty();
    } else {
      used = from_b[v] <= instance.l_p ||
             (instance.l_c >= 2 && shortest_cycle_through(g, v, alive) <= instance.l_c);
    }
    if (!used) removable.push_back(v);
  }
  return removable;
}

std::pair<Instance, KernelReport> kernelize(const Instance& instance) {
  const CompatibilityGraph& g = instance.graph;
  const int n = g.num_vertices();
  KernelReport report;
  report.removed = removable_vertices(instance);
  report.old_to_new.assign(n, -1);
  std::vector<char> gone(n, 0);
  for (VertexId v : report.removed) gone[v] = 1;
  for (VertexId v = 0; v < n; ++v)
    if (!gone[v]) {
      report.old_to_new[v] = static_cast<VertexId>(report.kept.size());
      report.kept.push_back(v);
    }

  const Exchange greedy = greedy_maximal_cover(instance);
  for (const auto& c : greedy.chains)
    report.greedy_vertices += static_cast<int>(c.vertices.size());
  for (const auto& c : greedy.cycles)
    report.greedy_vertices += static_cast<int>(c.vertices.size());
  if (exchange_value(greedy) >= instance.t) report.shortcut = greedy;

  report.max_degree = g.max_undirected_degree();
  const int L = std::max(instance.l_p, instance.l_c);
  std::uint64_t power = 1, sum = 1;
  for (int d = 1; d <= L; ++d) {
    power = sat_mul(power, static_cast<std::uint64_t>(report.max_degree));
    sum = sat_add(sum, power);
  }
  report.bound = sat_mul(static_cast<std::uint64_t>(instance.t), power);
  report.size_bound =
      sat_mul(static_cast<std::uint64_t>(report.greedy_vertices), sum);

  return {induced_instance(instance, report.kept), std::move(report)};
}

Exchange greedy_maximal_cover(const Instance& instance) {
  const CompatibilityGraph& g = instance.graph;
  const int n = g.num_vertices();
  std::vector<char> alive(n, 1);
  Exchange ex;

  while (true) {
    std::optional<Unit> pick;
    if (instance.l_p >= 1) {
      for (VertexId b : g.altruistic()) {
        if (!alive[b]) continue;
        for (VertexId w : g.out(b))
          if (alive[w]) {
            pick = Unit{UnitKind::chain, {b, w}};
            break;
          }
        if (pick) break;
      }
    }
    if (!pick && instance.l_c >= 2) {
      int girth = kUnreached;
      for (VertexId v = 0; v < n; ++v)
        if (alive[v] && !g.is_altruistic(v))
          girth = std::min(girth, shortest_cycle_through(g, v, alive));
      if (girth <= instance.l_c) {
        std::vector<char> on(n, 0);
        std::vector<VertexId> path;
        for (VertexId s = 0; s < n && !pick; ++s)
          if (alive[s] && !g.is_altruistic(s) &&
              cycle_of_length(g, s, s, girth, alive, on, path))
            pick = Unit{UnitKind::cycle, path};
      }
    }
    if (!pick) break;
    for (VertexId v : pick->vertices) alive[v] = 0;
    ex.add(*pick);
  }
  return ex;
}

std::optional<SolveResult> trivial_yes_check(const Instance& instance) {
  SolveResult result;
  result.algorithm = "greedy";
  if (instance.t <= 0) {
    result.feasible = true;
    result.exchange = Exchange{};
    return result;
  }
  Exchange greedy = greedy_maximal_cover(instance);
  const int value = exchange_value(greedy);
  if (value < instance.t) return std::nullopt;
  result.feasible = true;
  result.value = value;
  greedy.normalize();
  result.exchange = std::move(greedy);
  return result;
}

}  // namespace kex::kernel
