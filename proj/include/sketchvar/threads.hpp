#pragma once

#include <cstdint>
#include <functional>

namespace sketchvar {

/// Worker cap for parallel regions: explicit setting wins, then the
/// SKETCHVAR_THREADS environment variable, then hardware concurrency.
int thread_budget();
void set_thread_budget(int threads);  // <= 0 restores the default resolution

/// Runs fn(i) for i in [0, count). Work is split into contiguous chunks;
/// every invocation writes only to its own index, so results are identical
/// for any thread count.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace sketchvar
