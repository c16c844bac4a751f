#include "kex/tree_decomposition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "json.hpp"
#include "kex/errors.hpp"

namespace kex::tw {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

TreeDecomposition tree_decomposition(const UndirectedGraph& graph) {
  const int n = graph.n;
  TreeDecomposition td;
  if (n == 0) {
    td.bags.emplace_back();
    return td;
  }
  std::vector<std::set<VertexId>> adj(n);
  for (VertexId v = 0; v < n; ++v) adj[v].insert(graph.adj[v].begin(), graph.adj[v].end());

  std::vector<char> done(n, 0);
  std::vector<int> position(n, -1);
  std::vector<VertexId> order;
  std::vector<std::vector<VertexId>> neighbors_at_elim;
  for (int step = 0; step < n; ++step) {
    VertexId pick = -1;
    long best = -1;
    for (VertexId v = 0; v < n; ++v) {
      if (done[v]) continue;
      long fill = 0;
      for (auto i = adj[v].begin(); i != adj[v].end(); ++i)
        for (auto j = std::next(i); j != adj[v].end(); ++j)
          if (!adj[*i].count(*j)) ++fill;
      if (pick < 0 || fill < best) {
        pick = v;
        best = fill;
      }
    }
    std::vector<VertexId> nb(adj[pick].begin(), adj[pick].end());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (VertexId w : nb) adj[w].erase(pick);
    adj[pick].clear();
    done[pick] = 1;
    position[pick] = step;
    order.push_back(pick);
    std::vector<VertexId> bag = nb;
    bag.push_back(pick);
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(std::move(bag));
    neighbors_at_elim.push_back(std::move(nb));
  }

  int last_root = -1;
  for (int i = 0; i < n; ++i) {
    const auto& nb = neighbors_at_elim[i];
    if (nb.empty()) {
      if (last_root >= 0) td.edges.emplace_back(last_root, i);
      last_root = i;
      continue;
    }
    int parent = n;
    for (VertexId w : nb) parent = std::min(parent, position[w]);
    td.edges.emplace_back(i, parent);
  }
  return td;
}

bool is_valid(const TreeDecomposition& td, const UndirectedGraph& graph,
              std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int k = static_cast<int>(td.bags.size());
  if (k == 0) return fail("no bags");
  if (static_cast<int>(td.edges.size()) != k - 1)
    return fail("tree edge count is not bags - 1");
  std::vector<int> root(k);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return root[x] == x ? x : root[x] = find(root[x]);
  };
  for (const auto& [a, b] : td.edges) {
    if (a < 0 || a >= k || b < 0 || b >= k) return fail("tree edge out of range");
    const int ra = find(a), rb = find(b);
    if (ra == rb) return fail("tree edges contain a cycle");
    root[ra] = rb;
  }
  std::vector<std::vector<int>> holding(graph.n);
  for (int i = 0; i < k; ++i)
    for (VertexId v : td.bags[i]) {
      if (v < 0 || v >= graph.n) return fail("bag vertex out of range");
      holding[v].push_back(i);
    }
  for (VertexId v = 0; v < graph.n; ++v)
    if (holding[v].empty())
      return fail("vertex " + std::to_string(v) + " in no bag");
  for (const auto& [u, v] : graph.edges()) {
    bool covered = false;
    for (int i : holding[u])
      if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v)) {
        covered = true;
        break;
      }
    if (!covered)
      return fail("edge {" + std::to_string(u) + "," + std::to_string(v) +
                  "} in no bag");
  }
  for (VertexId v = 0; v < graph.n; ++v) {
    // Bags holding v are connected iff they span |holding| - 1 tree edges.
    std::vector<char> in(k, 0);
    for (int i : holding[v]) in[i] = 1;
    std::size_t inner = 0;
    for (const auto& [a, b] : td.edges)
      if (in[a] && in[b]) ++inner;
    if (inner + 1 != holding[v].size())
      return fail("bags of vertex " + std::to_string(v) + " not connected");
  }
  return true;
}

TreeDecomposition parse_decomposition(std::string_view document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("decomposition: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("bags") || !doc["bags"].is_array())
    throw ParseError("decomposition: expected an object with 'bags'");
  TreeDecomposition td;
  try {
    for (const auto& bag : doc["bags"]) {
      auto b = bag.get<std::vector<VertexId>>();
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end())
        throw ParseError("decomposition: repeated vertex in a bag");
      td.bags.push_back(std::move(b));
    }
    if (doc.contains("edges"))
      for (const auto& e : doc["edges"]) {
        const auto pair = e.get<std::vector<int>>();
        if (pair.size() != 2) throw ParseError("decomposition: edge must be [i, j]");
        td.edges.emplace_back(pair[0], pair[1]);
      }
  } catch (const json::exception& e) {
    throw ParseError(std::string("decomposition: ") + e.what());
  }
  return td;
}

namespace {

class NiceBuilder {
 public:
  NiceBuilder(const TreeDecomposition& td, const UndirectedGraph& g)
      : td_(td), g_(g), tree_(td.bags.size()) {
    for (const auto& [a, b] : td.edges) {
      tree_[a].push_back(b);
      tree_[b].push_back(a);
    }
  }

  NiceDecomposition run() {
    const int top = build(0, -1);
    out_.root = move_to(top, td_.bags[0], {});
    return std::move(out_);
  }

 private:
  int add(NiceNode node) {
    out_.nodes.push_back(std::move(node));
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  int forget(int child, VertexId w) {
    std::vector<VertexId> bag = out_.nodes[child].bag;
    for (VertexId y : g_.adj[w]) {
      const Arc e{std::min(w, y), std::max(w, y)};
      if (std::binary_search(bag.begin(), bag.end(), y) && !introduced_.count(e)) {
        introduced_.insert(e);
        NiceNode node{NodeKind::introduce_edge, bag, -1, e, {child}};
        child = add(std::move(node));
      }
    }
    bag.erase(std::find(bag.begin(), bag.end(), w));
    return add(NiceNode{NodeKind::forget, std::move(bag), w, {-1, -1}, {child}});
  }

  int introduce(int child, VertexId w) {
    std::vector<VertexId> bag = out_.nodes[child].bag;
    bag.insert(std::upper_bound(bag.begin(), bag.end(), w), w);
    return add(NiceNode{NodeKind::introduce_vertex, std::move(bag), w, {-1, -1}, {child}});
  }

  int move_to(int node, const std::vector<VertexId>& from,
              const std::vector<VertexId>& to) {
    for (VertexId w : from)
      if (!std::binary_search(to.begin(), to.end(), w)) node = forget(node, w);
    for (VertexId w : to)
      if (!std::binary_search(from.begin(), from.end(), w)) node = introduce(node, w);
    return node;
  }

  int build(int u, int parent) {
    std::vector<int> tops;
    for (int c : tree_[u]) {
      if (c == parent) continue;
      tops.push_back(move_to(build(c, u), td_.bags[c], td_.bags[u]));
    }
    if (tops.empty()) return move_to(add(NiceNode{}), {}, td_.bags[u]);
    int cur = tops[0];
    for (std::size_t i = 1; i < tops.size(); ++i)
      cur = add(NiceNode{NodeKind::join, td_.bags[u], -1, {-1, -1}, {cur, tops[i]}});
    return cur;
  }

  const TreeDecomposition& td_;
  const UndirectedGraph& g_;
  std::vector<std::vector<int>> tree_;
  std::set<Arc> introduced_;
  NiceDecomposition out_;
};

}  // namespace

NiceDecomposition make_nice(const TreeDecomposition& td,
                            const UndirectedGraph& graph) {
  std::string why;
  if (!is_valid(td, graph, &why))
    throw ModelError("tree decomposition invalid: " + why);
  return NiceBuilder(td, graph).run();
}

bool is_nice(const NiceDecomposition& nice, const UndirectedGraph& graph,
             std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int k = static_cast<int>(nice.nodes.size());
  if (nice.root < 0 || nice.root >= k) return fail("root out of range");
  if (!nice.nodes[nice.root].bag.empty()) return fail("root bag not empty");
  std::vector<int> parents(k, 0);
  std::set<Arc> seen;
  for (int i = 0; i < k; ++i) {
    const NiceNode& node = nice.nodes[i];
    for (int c : node.children) {
      if (c < 0 || c >= i) return fail("child index not below parent");
      ++parents[c];
    }
    auto child_bag = [&](int j) -> const std::vector<VertexId>& {
      return nice.nodes[node.children[j]].bag;
    };
    std::vector<VertexId> expect;
    switch (node.kind) {
      case NodeKind::leaf:
        if (!node.children.empty() || !node.bag.empty()) return fail("bad leaf");
        break;
      case NodeKind::introduce_vertex:
        if (node.children.size() != 1) return fail("introduce arity");
        expect = child_bag(0);
        if (std::binary_search(expect.begin(), expect.end(), node.vertex))
          return fail("introduced vertex already present");
        expect.insert(std::upper_bound(expect.begin(), expect.end(), node.vertex),
                      node.vertex);
        if (expect != node.bag) return fail("introduce bag mismatch");
        break;
      case NodeKind::forget:
        if (node.children.size() != 1) return fail("forget arity");
        expect = node.bag;
        if (std::binary_search(expect.begin(), expect.end(), node.vertex))
          return fail("forgotten vertex still present");
        expect.insert(std::upper_bound(expect.begin(), expect.end(), node.vertex),
                      node.vertex);
        if (expect != child_bag(0)) return fail("forget bag mismatch");
        break;
      case NodeKind::introduce_edge: {
        if (node.children.size() != 1 || child_bag(0) != node.bag)
          return fail("introduce-edge bag mismatch");
        const auto [x, y] = node.edge;
        if (!(x < y) || !graph.adjacent(x, y)) return fail("introduced non-edge");
        if (!std::binary_search(node.bag.begin(), node.bag.end(), x) ||
            !std::binary_search(node.bag.begin(), node.bag.end(), y))
          return fail("edge endpoint outside bag");
        if (!seen.insert(node.edge).second) return fail("edge introduced twice");
        break;
      }
      case NodeKind::join:
        if (node.children.size() != 2 || child_bag(0) != node.bag ||
            child_bag(1) != node.bag)
          return fail("join bags differ");
        break;
    }
  }
  for (int i = 0; i < k; ++i)
    if (parents[i] != (i == nice.root ? 0 : 1))
      return fail("node " + std::to_string(i) + " has wrong parent count");
  if (seen.size() != graph.num_edges()) return fail("edge never introduced");
  return true;
}

}  // namespace kex::tw
