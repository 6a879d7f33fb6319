#ifndef DCPROOF_PARALLEL_HPP
#define DCPROOF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace dcproof {

// Runs fn(i) for every i in [0, count) on up to `jobs` threads (the calling
// thread included) and returns once all calls have finished. Work is handed
// out through a shared counter, so the assignment of indices to threads is
// arbitrary; callers write results into per-index slots.
//
// If calls throw, the exception of the lowest failing index is rethrown after
// the barrier, which keeps error reporting independent of `jobs`.
void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn);

unsigned default_jobs();

}  // namespace dcproof

#endif  // DCPROOF_PARALLEL_HPP
