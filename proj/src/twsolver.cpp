#include "kex/twsolver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <unordered_map>

#include "kex/errors.hpp"

namespace kex::tw {

namespace {

struct Back {
  int first = -1;
  int second = -1;
  unsigned arcs = 0;  // introduce_edge: bit 0 = (x,y), bit 1 = (y,x)
};

struct Table {
  std::vector<DpState> states;
  std::vector<int> value;
  std::vector<Back> back;
  std::unordered_map<std::string, int> index;
};

void put_int(std::string& out, int x) {
  out.append(reinterpret_cast<const char*>(&x), sizeof x);
}

void sort_blocks(DpState& s) {
  std::sort(s.blocks.begin(), s.blocks.end(), [](const Block& a, const Block& b) {
    return *std::min_element(a.order.begin(), a.order.end()) <
           *std::min_element(b.order.begin(), b.order.end());
  });
}

void rotate_to_min(std::vector<VertexId>& order) {
  std::rotate(order.begin(), std::min_element(order.begin(), order.end()),
              order.end());
}

int find_block(const DpState& s, VertexId v) {
  for (int i = 0; i < static_cast<int>(s.blocks.size()); ++i)
    if (std::find(s.blocks[i].order.begin(), s.blocks[i].order.end(), v) !=
        s.blocks[i].order.end())
      return i;
  return -1;
}

std::optional<DpState> apply_arc(const DpState& s, VertexId u, VertexId v) {
  const int bu = find_block(s, u);
  const int bv = find_block(s, v);
  if (bu < 0 || bv < 0) return std::nullopt;
  const Block& from = s.blocks[bu];
  const Block& to = s.blocks[bv];
  if (from.cycle || to.cycle) return std::nullopt;
  if (!from.end_in_bag || from.order.back() != u) return std::nullopt;
  if (!to.start_in_bag || to.order.front() != v) return std::nullopt;

  DpState next = s;
  if (bu == bv) {
    Block& b = next.blocks[bu];
    if (b.altruistic) return std::nullopt;
    b.cycle = true;
    b.length += 1;
    b.arcs.emplace_back(u, v);
    std::sort(b.arcs.begin(), b.arcs.end());
    rotate_to_min(b.order);
    return next;
  }
  if (to.altruistic) return std::nullopt;
  Block merged;
  merged.order = from.order;
  merged.order.insert(merged.order.end(), to.order.begin(), to.order.end());
  merged.arcs = from.arcs;
  merged.arcs.insert(merged.arcs.end(), to.arcs.begin(), to.arcs.end());
  merged.arcs.emplace_back(u, v);
  std::sort(merged.arcs.begin(), merged.arcs.end());
  merged.length = from.length + to.length + 1;
  merged.altruistic = from.altruistic;
  merged.start_in_bag = from.start_in_bag;
  merged.end_in_bag = to.end_in_bag;
  next.blocks.erase(next.blocks.begin() + std::max(bu, bv));
  next.blocks.erase(next.blocks.begin() + std::min(bu, bv));
  next.blocks.push_back(std::move(merged));
  sort_blocks(next);
  return next;
}

std::optional<DpState> forget_vertex(const DpState& s, VertexId w) {
  const int bi = find_block(s, w);
  if (bi < 0) return s;
  DpState next = s;
  Block& b = next.blocks[bi];
  if (b.order.size() == 1) {
    if (b.cycle || (b.altruistic && b.length >= 1)) {
      next.blocks.erase(next.blocks.begin() + bi);
      return next;
    }
    return std::nullopt;
  }
  if (!b.cycle) {
    if (b.order.front() == w) b.start_in_bag = false;
    if (b.order.back() == w) b.end_in_bag = false;
  }
  b.order.erase(std::find(b.order.begin(), b.order.end(), w));
  if (b.cycle) rotate_to_min(b.order);
  std::erase_if(b.arcs, [w](const Arc& a) { return a.first == w || a.second == w; });
  sort_blocks(next);
  return next;
}

// Virtual edges of a block: consecutive order vertices, the closing edge of
// a cycle, and a dangling in/out edge where the start/end left the bag.
struct Degrees {
  std::uint64_t used = 0, in = 0, out = 0;
};

Degrees degrees(const DpState& s, const std::vector<VertexId>& bag) {
  auto pos = [&](VertexId v) {
    return std::uint64_t{1}
           << (std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  };
  Degrees d;
  for (const Block& b : s.blocks) {
    const std::size_t k = b.order.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t m = pos(b.order[i]);
      d.used |= m;
      if (b.cycle) {
        if (b.length > 0) d.in |= m, d.out |= m;
        continue;
      }
      if (i > 0 || !b.start_in_bag) d.in |= m;
      if (i + 1 < k || !b.end_in_bag) d.out |= m;
    }
  }
  return d;
}

std::optional<DpState> join_states(const DpState& x, const DpState& y) {
  std::map<VertexId, VertexId> succ, pred;
  std::map<VertexId, char> dangling_in, dangling_out;
  std::vector<const Block*> all;
  for (const auto* s : {&x, &y})
    for (const Block& b : s->blocks) all.push_back(&b);

  // Union blocks that share a vertex.
  const int nb = static_cast<int>(all.size());
  std::vector<int> root(nb);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  std::map<VertexId, int> owner;
  for (int i = 0; i < nb; ++i) {
    const Block& b = *all[i];
    const std::size_t k = b.order.size();
    for (std::size_t j = 0; j < k; ++j) {
      const VertexId v = b.order[j];
      if (auto it = owner.find(v); it != owner.end())
        root[find(i)] = find(it->second);
      else
        owner[v] = i;
      const bool has_next = b.cycle ? b.length > 0 : j + 1 < k;
      if (has_next) {
        const VertexId w = b.order[(j + 1) % k];
        if (succ.count(v) || pred.count(w)) return std::nullopt;
        succ[v] = w;
        pred[w] = v;
      }
    }
    if (!b.cycle && !b.start_in_bag) dangling_in[b.order.front()] = 1;
    if (!b.cycle && !b.end_in_bag) dangling_out[b.order.back()] = 1;
  }
  for (const auto& [v, _] : dangling_in)
    if (pred.count(v)) return std::nullopt;
  for (const auto& [v, _] : dangling_out)
    if (succ.count(v)) return std::nullopt;

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < nb; ++i) groups[find(i)].push_back(i);

  DpState out;
  for (const auto& [_, members] : groups) {
    Block merged;
    std::vector<VertexId> verts;
    for (int i : members) {
      const Block& b = *all[i];
      merged.length += b.length;
      merged.altruistic = merged.altruistic || b.altruistic;
      merged.arcs.insert(merged.arcs.end(), b.arcs.begin(), b.arcs.end());
      verts.insert(verts.end(), b.order.begin(), b.order.end());
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::sort(merged.arcs.begin(), merged.arcs.end());

    VertexId start = -1;
    for (VertexId v : verts)
      if (!pred.count(v)) {
        if (start >= 0) return std::nullopt;
        start = v;
      }
    merged.cycle = start < 0;
    if (merged.cycle) start = verts.front();
    VertexId cur = start;
    do {
      merged.order.push_back(cur);
      auto it = succ.find(cur);
      if (it == succ.end()) break;
      cur = it->second;
    } while (cur != start &&
             merged.order.size() <= verts.size());
    if (merged.order.size() != verts.size()) return std::nullopt;
    if (!merged.cycle) {
      merged.start_in_bag = !dangling_in.count(merged.order.front());
      merged.end_in_bag = !dangling_out.count(merged.order.back());
    }
    out.blocks.push_back(std::move(merged));
  }
  sort_blocks(out);
  return out;
}

class Solver {
 public:
  Solver(const Instance& inst, const NiceDecomposition& nice, std::size_t cap)
      : inst_(inst), nice_(nice), cap_(cap), tables_(nice.nodes.size()) {}

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<int> remaining_parents(nice_.nodes.size(), 0);
    for (const NiceNode& node : nice_.nodes)
      for (int c : node.children) ++remaining_parents[c];

    std::size_t peak = 0;
    for (int u = 0; u < static_cast<int>(nice_.nodes.size()); ++u) {
      process(u);
      peak = std::max(peak, tables_[u].states.size());
      for (int c : nice_.nodes[u].children)
        if (--remaining_parents[c] == 0) {
          tables_[c].states.clear();
          tables_[c].states.shrink_to_fit();
          tables_[c].index.clear();
        }
    }

    const Table& root = tables_[nice_.root];
    auto it = root.index.find(encode(DpState{}));
    if (it == root.index.end()) throw InternalError("tw: empty root state missing");

    SolveResult result;
    result.algorithm = "tw";
    result.value = root.value[it->second];
    result.feasible = result.value >= inst_.t;
    Exchange ex = traceback(it->second);
    if (exchange_value(ex) != result.value ||
        !validate_exchange(inst_, ex).ok())
      throw InternalError("tw: traceback certificate failed validation");
    ex.normalize();
    result.exchange = std::move(ex);
    int width = -1;
    for (const NiceNode& node : nice_.nodes)
      width = std::max(width, static_cast<int>(node.bag.size()) - 1);
    result.stats["width"] = width;
    result.stats["nice_nodes"] = static_cast<double>(nice_.nodes.size());
    result.stats["max_table_entries"] = static_cast<double>(peak);
    result.stats["runtime_ms"] = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
    return result;
  }

 private:
  void put(Table& t, DpState&& s, int value, Back back) {
    if (!admissible(s, inst_)) return;
    std::string key = encode(s);
    auto it = t.index.find(key);
    if (it != t.index.end()) {
      if (value > t.value[it->second]) {
        t.value[it->second] = value;
        t.back[it->second] = back;
      }
      return;
    }
    if (t.states.size() >= cap_)
      throw CapacityError("tw: node table exceeds " + std::to_string(cap_) +
                          " entries");
    t.index.emplace(std::move(key), static_cast<int>(t.states.size()));
    t.states.push_back(std::move(s));
    t.value.push_back(value);
    t.back.push_back(back);
  }

  void process(int u) {
    const NiceNode& node = nice_.nodes[u];
    Table& out = tables_[u];
    switch (node.kind) {
      case NodeKind::leaf:
        put(out, DpState{}, 0, {});
        break;
      case NodeKind::introduce_vertex: {
        const Table& in = tables_[node.children[0]];
        const VertexId w = node.vertex;
        for (int i = 0; i < static_cast<int>(in.states.size()); ++i) {
          put(out, DpState(in.states[i]), in.value[i], {i});
          DpState s = in.states[i];
          Block b;
          b.order = {w};
          b.altruistic = inst_.graph.is_altruistic(w);
          s.blocks.push_back(std::move(b));
          sort_blocks(s);
          put(out, std::move(s), in.value[i], {i});
        }
        break;
      }
      case NodeKind::introduce_edge: {
        const Table& in = tables_[node.children[0]];
        const auto [x, y] = node.edge;
        const bool xy = inst_.graph.has_arc(x, y);
        const bool yx = inst_.graph.has_arc(y, x);
        for (int i = 0; i < static_cast<int>(in.states.size()); ++i) {
          const DpState& s = in.states[i];
          const int v = in.value[i];
          put(out, DpState(s), v, {i, -1, 0});
          std::optional<DpState> a, b;
          if (xy && (a = apply_arc(s, x, y))) {
            if (yx)
              if (auto ab = apply_arc(*a, y, x)) put(out, std::move(*ab), v + 2, {i, -1, 3});
            put(out, std::move(*a), v + 1, {i, -1, 1});
          }
          if (yx && (b = apply_arc(s, y, x))) put(out, std::move(*b), v + 1, {i, -1, 2});
        }
        break;
      }
      case NodeKind::forget: {
        const Table& in = tables_[node.children[0]];
        for (int i = 0; i < static_cast<int>(in.states.size()); ++i)
          if (auto s = forget_vertex(in.states[i], node.vertex))
            put(out, std::move(*s), in.value[i], {i});
        break;
      }
      case NodeKind::join: {
        const Table& left = tables_[node.children[0]];
        const Table& right = tables_[node.children[1]];
        std::vector<Degrees> dl, dr;
        for (const auto& s : left.states) dl.push_back(degrees(s, node.bag));
        for (const auto& s : right.states) dr.push_back(degrees(s, node.bag));
        std::unordered_map<std::uint64_t, std::vector<int>> by_used;
        for (int j = 0; j < static_cast<int>(dr.size()); ++j)
          by_used[dr[j].used].push_back(j);
        for (int i = 0; i < static_cast<int>(dl.size()); ++i) {
          auto it = by_used.find(dl[i].used);
          if (it == by_used.end()) continue;
          for (int j : it->second) {
            if ((dl[i].in & dr[j].in) || (dl[i].out & dr[j].out)) continue;
            if (auto s = join_states(left.states[i], right.states[j]))
              put(out, std::move(*s), left.value[i] + right.value[j], {i, j});
          }
        }
        break;
      }
    }
  }

  Exchange traceback(int root_index) const {
    std::vector<Arc> arcs;
    std::vector<std::pair<int, int>> stack{{nice_.root, root_index}};
    while (!stack.empty()) {
      const auto [u, i] = stack.back();
      stack.pop_back();
      const NiceNode& node = nice_.nodes[u];
      const Back& b = tables_[u].back[i];
      if (node.kind == NodeKind::introduce_edge) {
        if (b.arcs & 1) arcs.emplace_back(node.edge.first, node.edge.second);
        if (b.arcs & 2) arcs.emplace_back(node.edge.second, node.edge.first);
      }
      if (node.children.size() >= 1) stack.emplace_back(node.children[0], b.first);
      if (node.children.size() == 2) stack.emplace_back(node.children[1], b.second);
    }

    const int n = inst_.graph.num_vertices();
    std::vector<VertexId> succ(n, -1), pred(n, -1);
    for (const auto& [u, v] : arcs) {
      if (succ[u] >= 0 || pred[v] >= 0)
        throw InternalError("tw: traceback produced a branching subgraph");
      succ[u] = v;
      pred[v] = u;
    }
    Exchange ex;
    std::vector<char> seen(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      if (pred[v] >= 0 || succ[v] < 0) continue;
      Chain c;
      for (VertexId w = v; w >= 0; w = succ[w]) {
        c.vertices.push_back(w);
        seen[w] = 1;
      }
      ex.chains.push_back(std::move(c));
    }
    for (VertexId v = 0; v < n; ++v) {
      if (seen[v] || succ[v] < 0) continue;
      Cycle c;
      for (VertexId w = v; !seen[w]; w = succ[w]) {
        c.vertices.push_back(w);
        seen[w] = 1;
      }
      ex.cycles.push_back(Cycle::canonical(std::move(c.vertices)));
    }
    return ex;
  }

  const Instance& inst_;
  const NiceDecomposition& nice_;
  std::size_t cap_;
  std::vector<Table> tables_;
};

}  // namespace

bool admissible(const DpState& state, const Instance& instance) {
  const int longest = std::max(instance.l_p, instance.l_c);
  for (const Block& b : state.blocks) {
    const int k = static_cast<int>(b.order.size());
    if (b.cycle && b.altruistic) return false;
    if (!b.cycle && !b.altruistic && !b.start_in_bag) return false;
    if (b.cycle && b.length < std::max(2, k)) return false;
    if (!b.cycle && b.length < k - 1) return false;
    if (b.length > longest) return false;
    if (b.cycle && b.length > instance.l_c) return false;
    if (b.altruistic && b.length > instance.l_p) return false;
    int alt = 0;
    for (VertexId v : b.order) alt += instance.graph.is_altruistic(v);
    if (alt > 1) return false;
  }
  return true;
}

std::string encode(const DpState& state) {
  std::string key;
  for (const Block& b : state.blocks) {
    put_int(key, static_cast<int>(b.order.size()) |
                     (b.cycle << 8) | (b.altruistic << 9) |
                     (b.start_in_bag << 10) | (b.end_in_bag << 11));
    put_int(key, b.length);
    for (VertexId v : b.order) put_int(key, v);
    put_int(key, static_cast<int>(b.arcs.size()));
    for (const auto& [u, v] : b.arcs) {
      put_int(key, u);
      put_int(key, v);
    }
  }
  return key;
}

SolveResult dp_solve(const Instance& instance, const NiceDecomposition& nice,
                     std::size_t table_cap) {
  for (const NiceNode& node : nice.nodes)
    if (node.bag.size() > 64)
      throw CapacityError("tw: bags above 64 vertices are not supported");
  return Solver(instance, nice, table_cap).run();
}

SolveResult solve_tw(const Instance& instance, const Options& options) {
  const UndirectedGraph g = underlying_undirected(instance.graph);
  const TreeDecomposition td =
      options.decomposition ? *options.decomposition : tree_decomposition(g);
  const NiceDecomposition nice = make_nice(td, g);
  return dp_solve(instance, nice, options.table_cap);
}

}  // namespace kex::tw
