#include "extremo/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace extremo {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& work) {
    if (count == 0) return;
    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > count) workers = static_cast<unsigned>(count);

    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto runner = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(runner);
    for (auto& t : pool) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace extremo
