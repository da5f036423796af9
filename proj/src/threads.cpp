#include "sketchvar/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sketchvar {

namespace {
std::atomic<int> g_budget{0};
}

int thread_budget() {
    const int set = g_budget.load(std::memory_order_relaxed);
    if (set > 0) return set;
    if (const char* env = std::getenv("SKETCHVAR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_thread_budget(int threads) { g_budget.store(threads, std::memory_order_relaxed); }

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(thread_budget(), count));
    if (workers <= 1 || count < 64) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    const std::int64_t chunk = std::max<std::int64_t>(1, count / (8 * workers));
    auto body = [&] {
        for (;;) {
            const std::int64_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            const std::int64_t end = std::min(begin + chunk, count);
            for (std::int64_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace sketchvar
