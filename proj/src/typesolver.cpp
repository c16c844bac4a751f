#include "kex/typesolver.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <string>
#include <unordered_map>

#include "kex/errors.hpp"
#include "kex/rng.hpp"

namespace kex::types {

namespace {

std::uint64_t hash_list(std::span<const VertexId> list, std::uint64_t h) {
  for (VertexId v : list) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return mix64(h ^ list.size());
}

bool least_rotation(const std::vector<int>& seq) {
  const std::size_t k = seq.size();
  for (std::size_t r = 1; r < k; ++r)
    for (std::size_t i = 0; i < k; ++i) {
      const int a = seq[(r + i) % k];
      if (a != seq[i]) {
        if (a < seq[i]) return false;
        break;
      }
    }
  return true;
}

class SignatureSearch {
 public:
  SignatureSearch(const Instance& inst, const TypePartition& p, std::size_t cap)
      : p_(p), cap_(cap), count_(p.theta(), 0) {
    const int theta = p.theta();
    max_path_ = std::min(theta + 4, inst.l_p + 1);
    max_cycle_ = std::min(theta + 3, inst.l_c);
  }

  std::vector<Signature> run() {
    for (int c = 0; c < p_.theta(); ++c) {
      if (!p_.altruistic_class[c] || max_path_ < 2) continue;
      extend_path(c);
    }
    for (int c = 0; c < p_.theta(); ++c) {
      if (p_.altruistic_class[c] || max_cycle_ < 2) continue;
      extend_cycle(c, c);
    }
    return std::move(out_);
  }

 private:
  void push(int c) {
    seq_.push_back(c);
    ++count_[c];
  }
  void pop() {
    --count_[seq_.back()];
    seq_.pop_back();
  }
  bool room(int c) const { return count_[c] < p_.size(c); }

  void emit(UnitKind kind) {
    if (out_.size() >= cap_)
      throw CapacityError("types: more than " + std::to_string(cap_) +
                          " signatures");
    out_.push_back(Signature{kind, seq_});
  }

  void extend_path(int c) {
    push(c);
    if (seq_.size() >= 2) emit(UnitKind::chain);
    if (static_cast<int>(seq_.size()) < max_path_)
      for (int d = 0; d < p_.theta(); ++d)
        if (p_.class_adj[c][d] && room(d)) extend_path(d);
    pop();
  }

  void extend_cycle(int first, int c) {
    push(c);
    if (seq_.size() >= 2 && p_.class_adj[c][first] && least_rotation(seq_))
      emit(UnitKind::cycle);
    if (static_cast<int>(seq_.size()) < max_cycle_)
      for (int d = first; d < p_.theta(); ++d)
        if (p_.class_adj[c][d] && room(d)) extend_cycle(first, d);
    pop();
  }

  const TypePartition& p_;
  std::size_t cap_;
  int max_path_ = 0;
  int max_cycle_ = 0;
  std::vector<int> count_;
  std::vector<int> seq_;
  std::vector<Signature> out_;
};

class IlpSearch {
 public:
  explicit IlpSearch(const IlpModel& m) : m_(m) {
    const std::size_t vars = m.objective.size();
    const std::size_t classes = m.capacity.size();
    suffix_.assign(vars + 1, std::vector<long long>(classes, 0));
    for (std::size_t j = vars; j-- > 0;)
      for (std::size_t c = 0; c < classes; ++c)
        suffix_[j][c] = suffix_[j + 1][c] +
                        static_cast<long long>(m.usage[j][c]) * m.upper[j];
    // A variable's objective spread evenly over the class slots it uses;
    // suffix maxima of that rate bound what later variables can add.
    rate_.assign(vars + 1, std::vector<double>(classes, 0.0));
    free_.assign(vars + 1, 0.0);
    for (std::size_t j = vars; j-- > 0;) {
      long long total = 0;
      for (std::size_t c = 0; c < classes; ++c) total += m.usage[j][c];
      rate_[j] = rate_[j + 1];
      free_[j] = free_[j + 1];
      if (total == 0) {
        free_[j] += static_cast<double>(m.objective[j]) * m.upper[j];
        continue;
      }
      const double r = static_cast<double>(m.objective[j]) / total;
      for (std::size_t c = 0; c < classes; ++c)
        if (m.usage[j][c] > 0) rate_[j][c] = std::max(rate_[j][c], r);
    }
    rem_ = m.capacity;
    x_.assign(vars, 0);
  }

  // Best objective, exploring large values first.
  int maximize() {
    best_ = -1;
    first_fit_ = false;
    descend(0, 0);
    return best_;
  }

  // Lexicographically smallest x with objective == target.
  std::vector<int> smallest(int target) {
    best_ = target - 1;
    first_fit_ = true;
    found_ = false;
    descend(0, 0);
    return best_x_;
  }

  std::uint64_t nodes = 0;

 private:
  double bound(std::size_t j) const {
    double b = free_[j];
    for (std::size_t c = 0; c < rem_.size(); ++c)
      if (suffix_[j][c] > 0)
        b += rate_[j][c] *
             static_cast<double>(std::min<long long>(rem_[c], suffix_[j][c]));
    return b;
  }

  int cap_for(std::size_t j) const {
    int hi = m_.upper[j];
    for (std::size_t c = 0; c < rem_.size(); ++c)
      if (m_.usage[j][c] > 0) hi = std::min(hi, rem_[c] / m_.usage[j][c]);
    return hi;
  }

  void descend(std::size_t j, int value) {
    if (found_) return;
    ++nodes;
    if (j == x_.size()) {
      if (value > best_) {
        best_ = value;
        best_x_ = x_;
        if (first_fit_) found_ = true;
      }
      return;
    }
    if (value + bound(j) < best_ + 1 - 1e-9) return;
    const int hi = cap_for(j);
    auto apply = [&](int v, int sign) {
      for (std::size_t c = 0; c < rem_.size(); ++c)
        rem_[c] -= sign * v * m_.usage[j][c];
    };
    if (first_fit_) {
      for (int v = 0; v <= hi && !found_; ++v) {
        apply(v, 1);
        x_[j] = v;
        descend(j + 1, value + v * m_.objective[j]);
        apply(v, -1);
      }
    } else {
      for (int v = hi; v >= 0; --v) {
        apply(v, 1);
        x_[j] = v;
        descend(j + 1, value + v * m_.objective[j]);
        apply(v, -1);
      }
    }
    x_[j] = 0;
  }

  const IlpModel& m_;
  std::vector<std::vector<long long>> suffix_;
  std::vector<std::vector<double>> rate_;
  std::vector<double> free_;
  std::vector<int> rem_;
  std::vector<int> x_;
  std::vector<int> best_x_;
  int best_ = -1;
  bool first_fit_ = false;
  bool found_ = false;
};

}  // namespace

TypePartition compute_types(const CompatibilityGraph& graph) {
  const int n = graph.num_vertices();
  TypePartition p;
  p.type_of.assign(n, -1);
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  for (VertexId v = 0; v < n; ++v) {
    const std::uint64_t h = hash_list(graph.out(v), hash_list(graph.in(v), 17));
    auto& bucket = buckets[h];
    for (int c : bucket) {
      const VertexId rep = p.classes[c].front();
      if (std::ranges::equal(graph.in(rep), graph.in(v)) &&
          std::ranges::equal(graph.out(rep), graph.out(v))) {
        p.type_of[v] = c;
        break;
      }
    }
    if (p.type_of[v] < 0) {
      p.type_of[v] = p.theta();
      bucket.push_back(p.theta());
      p.classes.emplace_back();
      p.altruistic_class.push_back(0);
    }
    p.classes[p.type_of[v]].push_back(v);
    if (graph.is_altruistic(v)) p.altruistic_class[p.type_of[v]] = 1;
  }
  const int theta = p.theta();
  p.class_adj.assign(theta, std::vector<char>(theta, 0));
  for (int c = 0; c < theta; ++c)
    for (int d = 0; d < theta; ++d)
      p.class_adj[c][d] =
          graph.has_arc(p.classes[c].front(), p.classes[d].front());
  return p;
}

PrunedInstance prune_mixed_types(const Instance& instance,
                                 const TypePartition& partition) {
  const CompatibilityGraph& g = instance.graph;
  PrunedInstance out;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (g.is_altruistic(v) || !partition.altruistic_class[partition.type_of[v]])
      out.kept.push_back(v);
  out.instance = induced_instance(instance, out.kept);
  return out;
}

std::vector<Signature> enumerate_signatures(const Instance& instance,
                                            const TypePartition& partition,
                                            std::size_t cap) {
  return SignatureSearch(instance, partition, cap).run();
}

IlpModel build_ilp(const std::vector<Signature>& signatures,
                   const TypePartition& partition) {
  IlpModel m;
  const int theta = partition.theta();
  for (int c = 0; c < theta; ++c) m.capacity.push_back(partition.size(c));
  for (const Signature& s : signatures) {
    std::vector<int> use(theta, 0);
    for (int c : s.seq) ++use[c];
    int ub = 0;
    bool first = true;
    for (int c = 0; c < theta; ++c)
      if (use[c] > 0) {
        const int q = partition.size(c) / use[c];
        ub = first ? q : std::min(ub, q);
        first = false;
      }
    m.objective.push_back(s.covered());
    m.usage.push_back(std::move(use));
    m.upper.push_back(ub);
  }
  return m;
}

IlpSolution solve_ilp(const IlpModel& model, std::size_t variable_cap) {
  if (model.objective.size() > variable_cap)
    throw CapacityError("types: " + std::to_string(model.objective.size()) +
                        " ILP variables exceed cap " +
                        std::to_string(variable_cap));
  IlpSolution sol;
  IlpSearch search(model);
  sol.objective = search.maximize();
  sol.x = search.smallest(sol.objective);
  sol.nodes = search.nodes;
  return sol;
}

Exchange reconstruct(const std::vector<Signature>& signatures,
                     const std::vector<int>& x, const Instance& instance,
                     const TypePartition& partition) {
  const CompatibilityGraph& g = instance.graph;
  std::vector<std::size_t> next(partition.theta(), 0);
  Exchange ex;
  for (std::size_t j = 0; j < signatures.size(); ++j) {
    const Signature& s = signatures[j];
    for (int copy = 0; copy < x[j]; ++copy) {
      Unit unit{s.kind, {}};
      for (int c : s.seq) {
        if (next[c] >= partition.classes[c].size())
          throw InternalError("types: class " + std::to_string(c) +
                              " exhausted during reconstruction");
        unit.vertices.push_back(partition.classes[c][next[c]++]);
      }
      const std::size_t k = unit.vertices.size();
      const std::size_t edges = s.kind == UnitKind::chain ? k - 1 : k;
      for (std::size_t i = 0; i < edges; ++i)
        if (!g.has_arc(unit.vertices[i], unit.vertices[(i + 1) % k]))
          throw InternalError("types: reconstructed unit misses an arc");
      ex.add(unit);
    }
  }
  return ex;
}

SolveResult solve_types(const Instance& instance, std::size_t cap) {
  if (instance.l_p > instance.l_c)
    throw PreconditionError("types solver requires l_p <= l_c (got l_p = " +
                            std::to_string(instance.l_p) + ", l_c = " +
                            std::to_string(instance.l_c) + ")");
  const auto start = std::chrono::steady_clock::now();
  const TypePartition original = compute_types(instance.graph);
  const PrunedInstance pruned = prune_mixed_types(instance, original);
  const TypePartition partition = compute_types(pruned.instance.graph);
  const std::vector<Signature> sigs =
      enumerate_signatures(pruned.instance, partition, cap);
  const IlpModel model = build_ilp(sigs, partition);
  const IlpSolution sol = solve_ilp(model, cap);
  Exchange local = reconstruct(sigs, sol.x, pruned.instance, partition);
  if (exchange_value(local) != sol.objective ||
      !validate_exchange(pruned.instance, local).ok())
    throw InternalError("types: reconstruction disagrees with the ILP");

  SolveResult result;
  result.algorithm = "types";
  result.value = sol.objective;
  result.feasible = sol.objective >= instance.t;
  Exchange lifted = lift_exchange(local, pruned.kept);
  lifted.normalize();
  result.exchange = std::move(lifted);
  result.stats["theta"] = original.theta();
  result.stats["theta_pruned"] = partition.theta();
  result.stats["signatures"] = static_cast<double>(sigs.size());
  result.stats["ilp_nodes"] = static_cast<double>(sol.nodes);
  result.stats["runtime_ms"] = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
  return result;
}

}  // namespace kex::types
