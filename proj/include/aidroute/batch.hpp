#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "aidroute/field.hpp"
#include "aidroute/route.hpp"
#include "aidroute/walker.hpp"

namespace aidroute {

// Runs `count` independent walks from one origin. Walk i uses seed
// derive_seed(master_seed, i) and may have its parameters adjusted by
// `customize` before it starts. Results are indexed by i whatever `jobs` is.
std::vector<RouteResult> run_walks(const Field& field, Cell origin, const WalkParams& base,
                                   std::size_t count, std::uint64_t master_seed,
                                   std::size_t jobs = 1,
                                   const std::function<void(std::size_t, WalkParams&)>& customize = {},
                                   const BonusLayer* bonus = nullptr);

// Calls fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace aidroute
