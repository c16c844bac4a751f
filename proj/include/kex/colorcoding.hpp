#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kex/core.hpp"
#include "kex/rng.hpp"
#include "kex/solve_result.hpp"

namespace kex::colorcoding {

// Vertex coloring with `palette` colors (3t for the solver).
struct Coloring {
  int palette = 0;
  std::vector<int> color;
};

Coloring random_coloring(int n, int t, Rng& rng);

// A single chain with exactly t edges (when l_p >= t) or a single cycle with
// length in [t, l_c] (when l_c >= t). Absent when neither exists or t == 0.
std::optional<Exchange> check_long_unit(const Instance& instance);

// A colorful unit together with its color set.
struct ColorUnit {
  std::uint64_t colors = 0;
  int covered = 0;
  Unit unit;
};

// One representative per (color set, kind) over all colorful chains with
// 1..l_p edges and colorful cycles with 2..l_c edges, where every vertex
// color is in `allowed`. Colors must be below 64. Computed by a layered
// dynamic program over (vertex, used colors) states.
std::vector<ColorUnit> colorful_units(const Instance& instance,
                                      const std::vector<int>& color,
                                      std::uint64_t allowed);

// A chain with i edges or a cycle of length i, colorful, drawn from colors
// in `allowed` (chains are tried first). Caps of `instance` apply as given.
std::optional<Unit> colorful_unit(const Instance& instance,
                                  const Coloring& coloring,
                                  std::uint64_t allowed, int i);

// D(C, t'): can units with pairwise disjoint color sets inside C cover
// exactly t' patients. Tracked for 0 <= t' <= max_value; filled lazily from
// the lowest color of C, which is either left unused or covered by a unit
// whose lowest color it is.
class SubsetTable {
 public:
  SubsetTable(std::vector<ColorUnit> units, int max_value,
              std::size_t entry_cap);

  bool get(std::uint64_t colors, int value);
  // Bit v set iff get(colors, v).
  std::uint64_t reachable(std::uint64_t colors);
  // Units realizing D(colors, value); requires get(colors, value).
  std::vector<const ColorUnit*> traceback(std::uint64_t colors, int value);

  std::size_t size() const { return memo_.size(); }

 private:
  std::vector<ColorUnit> units_;
  std::vector<std::vector<std::size_t>> by_low_;
  std::uint64_t limit_;
  std::size_t cap_;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

// ceil(e^{3t}), saturating at UINT64_MAX.
std::uint64_t default_trials(int t);

struct Options {
  std::optional<std::uint64_t> trials;  // default_trials(t) when absent
  std::uint64_t seed = 0;
  // Enumerate every coloring up to renaming of colors instead of sampling.
  bool exhaustive = false;
  std::size_t table_cap = std::size_t{1} << 24;
};

// Decision for "cover >= t" with one-sided error: YES answers carry a
// validated certificate, NO answers report the best value witnessed.
SolveResult solve_colorcoding(const Instance& instance, const Options& options);

}  // namespace kex::colorcoding
