#include "aidroute/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "aidroute/rng.hpp"

namespace aidroute {

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<RouteResult> run_walks(const Field& field, Cell origin, const WalkParams& base,
                                   std::size_t count, std::uint64_t master_seed, std::size_t jobs,
                                   const std::function<void(std::size_t, WalkParams&)>& customize,
                                   const BonusLayer* bonus) {
  std::vector<RouteResult> out(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    WalkParams p = base;
    p.seed = derive_seed(master_seed, i);
    if (customize) customize(i, p);
    out[i] = walk(field, origin, p, bonus);
  });
  return out;
}

}  // namespace aidroute
