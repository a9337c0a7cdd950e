#include "codazzi/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace codazzi {

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("CODAZZI_LAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = worker_count();
    if (n <= 0) return;
    if (workers == 1 || n < 64) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    constexpr int kBlock = 64;
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const int begin = next.fetch_add(kBlock);
            if (begin >= n) return;
            const int end = std::min(begin + kBlock, n);
            try {
                for (int i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace codazzi
