#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace aidroute {

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for work item `index` of a run keyed by `master`. Work is partitioned
// by index, so results never depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Thin wrapper over mt19937_64 with distribution code written out here, so
// draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53 bits.
  double uniform();
  // Uniform integer on [0, n); n must be > 0.
  std::size_t index(std::size_t n);
  // Standard normal (Box-Muller, caches the second variate).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aidroute
