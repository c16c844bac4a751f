#include "kex/colorcoding.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <unordered_set>

#include "kex/errors.hpp"

namespace kex::colorcoding {

namespace {

std::uint64_t bit(int c) { return std::uint64_t{1} << c; }

std::uint64_t low_mask(int k) { return k >= 64 ? ~std::uint64_t{0} : bit(k) - 1; }

// Exact search for one long unit; `path` holds the current simple path.
class LongUnitSearch {
 public:
  explicit LongUnitSearch(const Instance& inst)
      : g_(inst.graph), inst_(inst), on_(inst.graph.num_vertices(), 0) {}

  std::optional<Exchange> run() {
    const int t = inst_.t;
    if (inst_.l_p >= t) {
      for (VertexId b : g_.altruistic())
        if (chain(b, t)) {
          Exchange ex;
          ex.chains.push_back(Chain{path_});
          return ex;
        }
    }
    if (inst_.l_c >= std::max(t, 2)) {
      for (VertexId s = 0; s < g_.num_vertices(); ++s)
        if (!g_.is_altruistic(s) && cycle(s, s)) {
          Exchange ex;
          ex.cycles.push_back(Cycle{path_});
          return ex;
        }
    }
    return std::nullopt;
  }

 private:
  bool chain(VertexId v, int edges_left) {
    enter(v);
    if (edges_left == 0) return true;
    for (VertexId w : g_.out(v))
      if (!on_[w] && chain(w, edges_left - 1)) return true;
    leave(v);
    return false;
  }

  bool cycle(VertexId start, VertexId v) {
    enter(v);
    const int len = static_cast<int>(path_.size());
    for (VertexId w : g_.out(v)) {
      if (w == start && len >= std::max(inst_.t, 2)) return true;
      if (w > start && !on_[w] && len < inst_.l_c && cycle(start, w))
        return true;
    }
    leave(v);
    return false;
  }

  void enter(VertexId v) {
    on_[v] = 1;
    path_.push_back(v);
  }
  void leave(VertexId v) {
    on_[v] = 0;
    path_.pop_back();
  }

  const CompatibilityGraph& g_;
  const Instance& inst_;
  std::vector<char> on_;
  std::vector<VertexId> path_;
};

struct State {
  VertexId v;
  std::uint64_t used;
  int pred;  // index into the previous layer, -1 at layer 0
};

using Layer = std::vector<State>;

void dedup(Layer& layer) {
  std::stable_sort(layer.begin(), layer.end(), [](const State& a, const State& b) {
    return std::tie(a.v, a.used) < std::tie(b.v, b.used);
  });
  layer.erase(std::unique(layer.begin(), layer.end(),
                          [](const State& a, const State& b) {
                            return a.v == b.v && a.used == b.used;
                          }),
              layer.end());
}

std::vector<VertexId> walk_back(const std::vector<Layer>& layers, int depth,
                                int index) {
  std::vector<VertexId> seq(depth + 1);
  for (int d = depth; d >= 0; --d) {
    const State& s = layers[d][index];
    seq[d] = s.v;
    index = s.pred;
  }
  return seq;
}

// Canonical form of a coloring up to renaming: colors numbered by first
// appearance. Returns the number of colors used.
int canonicalize(std::vector<int>& color) {
  std::vector<int> rename;
  for (int& c : color) {
    auto it = std::find(rename.begin(), rename.end(), c);
    if (it == rename.end()) {
      rename.push_back(c);
      c = static_cast<int>(rename.size()) - 1;
    } else {
      c = static_cast<int>(it - rename.begin());
    }
  }
  return static_cast<int>(rename.size());
}

// Next restricted-growth string with at most `k` blocks; false when done.
bool next_partition(std::vector<int>& a, int k) {
  const int n = static_cast<int>(a.size());
  std::vector<int> prefix_max(n);
  int m = -1;
  for (int i = 0; i < n; ++i) {
    prefix_max[i] = m;
    m = std::max(m, a[i]);
  }
  for (int i = n - 1; i >= 1; --i) {
    if (a[i] <= prefix_max[i] && a[i] + 1 < k) {
      ++a[i];
      for (int j = i + 1; j < n; ++j) a[j] = 0;
      return true;
    }
  }
  return false;
}

struct TrialOutcome {
  bool yes = false;
  int best = 0;
  std::optional<Exchange> exchange;
  std::size_t table_entries = 0;
};

TrialOutcome run_trial(const Instance& clamped, const std::vector<int>& color,
                       int k, int t, std::size_t cap, int best_so_far) {
  TrialOutcome out;
  SubsetTable table(colorful_units(clamped, color, low_mask(k)), 2 * t, cap);
  const std::uint64_t all = low_mask(k);
  const std::uint64_t reach = table.reachable(all);
  out.table_entries = table.size();

  int target = -1;
  const std::uint64_t hits = reach & ~low_mask(t);
  if (hits != 0) {
    target = std::countr_zero(hits);
    out.yes = true;
  } else {
    out.best = 63 - std::countl_zero(reach);
    if (out.best > best_so_far) target = out.best;
  }
  if (target >= 0) {
    Exchange ex;
    for (const ColorUnit* u : table.traceback(all, target)) ex.add(u->unit);
    out.best = target;
    out.exchange = std::move(ex);
  }
  return out;
}

}  // namespace

Coloring random_coloring(int n, int t, Rng& rng) {
  Coloring c;
  c.palette = 3 * t;
  c.color.resize(n);
  for (int& x : c.color) x = static_cast<int>(rng.below(c.palette));
  return c;
}

std::optional<Exchange> check_long_unit(const Instance& instance) {
  if (instance.t <= 0) return std::nullopt;
  return LongUnitSearch(instance).run();
}

std::vector<ColorUnit> colorful_units(const Instance& instance,
                                      const std::vector<int>& color,
                                      std::uint64_t allowed) {
  const CompatibilityGraph& g = instance.graph;
  const auto ok = [&](VertexId v) { return (allowed >> color[v]) & 1; };
  std::vector<ColorUnit> units;

  if (instance.l_p >= 1) {
    std::vector<Layer> layers(1);
    for (VertexId b : g.altruistic())
      if (ok(b)) layers[0].push_back({b, bit(color[b]), -1});
    for (int d = 1; d <= instance.l_p && !layers.back().empty(); ++d) {
      Layer next;
      const Layer& prev = layers.back();
      for (int i = 0; i < static_cast<int>(prev.size()); ++i)
        for (VertexId w : g.out(prev[i].v))
          if (ok(w) && !(prev[i].used & bit(color[w])))
            next.push_back({w, prev[i].used | bit(color[w]), i});
      dedup(next);
      layers.push_back(std::move(next));
      for (int i = 0; i < static_cast<int>(layers[d].size()); ++i)
        units.push_back({layers[d][i].used, d,
                         Unit{UnitKind::chain, walk_back(layers, d, i)}});
    }
  }

  if (instance.l_c >= 2) {
    for (VertexId s = 0; s < g.num_vertices(); ++s) {
      if (g.is_altruistic(s) || !ok(s)) continue;
      const int cs = color[s];
      std::vector<Layer> layers(1, Layer{{s, bit(cs), -1}});
      for (int d = 1; d < instance.l_c && !layers.back().empty(); ++d) {
        Layer next;
        const Layer& prev = layers.back();
        for (int i = 0; i < static_cast<int>(prev.size()); ++i)
          for (VertexId w : g.out(prev[i].v))
            if (ok(w) && color[w] > cs && !(prev[i].used & bit(color[w])))
              next.push_back({w, prev[i].used | bit(color[w]), i});
        dedup(next);
        layers.push_back(std::move(next));
        for (int i = 0; i < static_cast<int>(layers[d].size()); ++i)
          if (g.has_arc(layers[d][i].v, s))
            units.push_back(
                {layers[d][i].used, d + 1,
                 Unit{UnitKind::cycle,
                      Cycle::canonical(walk_back(layers, d, i)).vertices}});
      }
    }
  }

  std::stable_sort(units.begin(), units.end(),
                   [](const ColorUnit& a, const ColorUnit& b) {
                     return std::tie(a.colors, a.unit.kind) <
                            std::tie(b.colors, b.unit.kind);
                   });
  units.erase(std::unique(units.begin(), units.end(),
                          [](const ColorUnit& a, const ColorUnit& b) {
                            return a.colors == b.colors &&
                                   a.unit.kind == b.unit.kind;
                          }),
              units.end());
  return units;
}

std::optional<Unit> colorful_unit(const Instance& instance,
                                  const Coloring& coloring,
                                  std::uint64_t allowed, int i) {
  for (UnitKind kind : {UnitKind::chain, UnitKind::cycle})
    for (const ColorUnit& u : colorful_units(instance, coloring.color, allowed))
      if (u.unit.kind == kind && u.covered == i) return u.unit;
  return std::nullopt;
}

SubsetTable::SubsetTable(std::vector<ColorUnit> units, int max_value,
                         std::size_t entry_cap)
    : units_(std::move(units)),
      by_low_(64),
      limit_(low_mask(max_value + 1)),
      cap_(entry_cap) {
  for (std::size_t i = 0; i < units_.size(); ++i)
    by_low_[std::countr_zero(units_[i].colors)].push_back(i);
}

std::uint64_t SubsetTable::reachable(std::uint64_t colors) {
  if (colors == 0) return 1;
  if (auto it = memo_.find(colors); it != memo_.end()) return it->second;
  const int low = std::countr_zero(colors);
  std::uint64_t r = reachable(colors & (colors - 1));
  for (std::size_t i : by_low_[low]) {
    const ColorUnit& u = units_[i];
    if ((u.colors & ~colors) == 0)
      r |= (reachable(colors & ~u.colors) << u.covered) & limit_;
  }
  if (memo_.size() >= cap_)
    throw CapacityError("colorcoding: subset table exceeds " +
                        std::to_string(cap_) + " entries");
  memo_.emplace(colors, r);
  return r;
}

bool SubsetTable::get(std::uint64_t colors, int value) {
  if (value < 0 || value >= 64) return false;
  return (reachable(colors) >> value) & 1;
}

std::vector<const ColorUnit*> SubsetTable::traceback(std::uint64_t colors,
                                                     int value) {
  std::vector<const ColorUnit*> chosen;
  while (colors != 0 && value > 0) {
    const std::uint64_t rest = colors & (colors - 1);
    if (get(rest, value)) {
      colors = rest;
      continue;
    }
    const ColorUnit* pick = nullptr;
    for (std::size_t i : by_low_[std::countr_zero(colors)]) {
      const ColorUnit& u = units_[i];
      if ((u.colors & ~colors) == 0 && get(colors & ~u.colors, value - u.covered)) {
        pick = &u;
        break;
      }
    }
    if (!pick) throw InternalError("colorcoding: broken subset table traceback");
    chosen.push_back(pick);
    colors &= ~pick->colors;
    value -= pick->covered;
  }
  if (value != 0) throw InternalError("colorcoding: traceback left a remainder");
  return chosen;
}

std::uint64_t default_trials(int t) {
  const double x = std::ceil(std::exp(3.0 * t));
  if (!(x < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(x);
}

SolveResult solve_colorcoding(const Instance& instance, const Options& options) {
  const auto start = std::chrono::steady_clock::now();
  const int t = instance.t;
  const int n = instance.graph.num_vertices();
  SolveResult result;
  result.algorithm = "color";
  auto finish = [&](std::uint64_t trials, std::uint64_t evaluated,
                    std::size_t table) {
    result.stats["trials"] = static_cast<double>(trials);
    result.stats["colorings_evaluated"] = static_cast<double>(evaluated);
    result.stats["max_table_entries"] = static_cast<double>(table);
    result.stats["runtime_ms"] = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
    return result;
  };

  if (options.trials && *options.trials == 0 && !options.exhaustive)
    throw PreconditionError("colorcoding: trials must be at least 1");
  if (t <= 0) {
    result.feasible = true;
    result.exchange = Exchange{};
    return finish(0, 0, 0);
  }
  if (auto ex = check_long_unit(instance)) {
    result.feasible = true;
    result.value = exchange_value(*ex);
    result.exchange = std::move(ex);
    result.stats["long_unit"] = 1;
    return finish(0, 0, 0);
  }
  if (2 * t + 1 > 64)
    throw CapacityError("colorcoding: target above 31 not supported");

  const Instance clamped(instance.graph, std::min(instance.l_p, t - 1),
                         std::min(instance.l_c, t - 1), t);
  const std::uint64_t trials =
      options.trials.value_or(default_trials(t));

  int best = -1;
  std::size_t max_table = 0;
  std::uint64_t evaluated = 0;
  auto consider = [&](const std::vector<int>& color, int k) {
    ++evaluated;
    TrialOutcome o = run_trial(clamped, color, k, t, options.table_cap, best);
    max_table = std::max(max_table, o.table_entries);
    if (o.exchange && (o.yes || o.best > best)) {
      best = o.best;
      result.exchange = std::move(o.exchange);
    }
    return o.yes;
  };
  auto accept = [&]() {
    result.value = best;
    result.feasible = true;
    result.exchange->normalize();
    if (!validate_exchange(instance, *result.exchange).ok() ||
        exchange_value(*result.exchange) != best)
      throw InternalError("colorcoding: certificate failed validation");
  };

  if (options.exhaustive) {
    if (n > 12)
      throw CapacityError("colorcoding: exhaustive colorings need n <= 12");
    const int k = std::min(n, 3 * t);
    std::vector<int> color(n, 0);
    std::uint64_t count = 0;
    bool more = true;
    while (more) {
      ++count;
      const int used = n == 0 ? 0 : *std::max_element(color.begin(), color.end()) + 1;
      if (consider(color, used)) {
        accept();
        return finish(count, evaluated, max_table);
      }
      more = n > 1 && next_partition(color, k);
    }
    result.value = std::max(best, 0);
    if (!result.exchange) result.exchange = Exchange{};
    result.exchange->normalize();
    return finish(count, evaluated, max_table);
  }

  // Outcomes depend only on which vertices share a color, so NO verdicts are
  // remembered per canonical coloring on small graphs.
  const bool memo = n <= 16;
  std::unordered_set<std::string> seen_no;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(options.seed, trial);
    Coloring c = random_coloring(n, t, rng);
    const int k = canonicalize(c.color);
    if (k > 64)
      throw CapacityError("colorcoding: more than 64 colors in use");
    std::string key;
    if (memo) {
      key.assign(c.color.begin(), c.color.end());
      if (seen_no.count(key)) continue;
    }
    if (consider(c.color, k)) {
      accept();
      result.stats["trial_found"] = static_cast<double>(trial);
      return finish(trial + 1, evaluated, max_table);
    }
    if (memo && seen_no.size() < (std::size_t{1} << 20)) seen_no.insert(key);
  }
  result.value = std::max(best, 0);
  if (!result.exchange) result.exchange = Exchange{};
  result.exchange->normalize();
  return finish(trials, evaluated, max_table);
}

}  // namespace kex::colorcoding
