#include "pawss/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace pawss {

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("PAWSS_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t)
        threads.emplace_back([&] {
            constexpr size_t kChunk = 16;
            for (;;) {
                size_t begin = next.fetch_add(kChunk);
                if (begin >= n) return;
                size_t end = std::min(begin + kChunk, n);
                for (size_t i = begin; i < end; ++i) fn(i);
            }
        });
    for (auto& t : threads) t.join();
}

}  // namespace pawss
