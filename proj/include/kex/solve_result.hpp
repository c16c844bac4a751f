#pragma once

#include <map>
#include <optional>
#include <string>

#include "kex/core.hpp"

namespace kex {

// Outcome of any solver. When `exchange` is present it validates against
// the instance and exchange_value(*exchange) == value.
struct SolveResult {
  bool feasible = false;
  int value = 0;
  std::optional<Exchange> exchange;
  std::string algorithm;
  std::map<std::string, double> stats;
};

}  // namespace kex
