#pragma once

#include <cstdint>
#include <random>

namespace kex {

// Reproducible generator: std::mt19937_64 (its output sequence is fixed by
// the C++ standard) plus a bounded draw defined here rather than through
// std::uniform_int_distribution, whose algorithm differs between standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, index), e.g. one per color-coding trial.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound must be positive. Rejection sampling on the
  // top of the 64-bit range, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace kex
