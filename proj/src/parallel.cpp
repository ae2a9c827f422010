#include "dgg/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace dgg {

std::size_t thread_cap() {
    if (const char* env = std::getenv("DG_GAUGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void for_each_chunk(
    std::size_t n,
    const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body) {
    if (n == 0) return;
    const std::size_t chunks = detail::chunk_count(n);
    const std::size_t workers = std::min(thread_cap(), chunks);

    auto run_chunk = [&](std::size_t c) {
        std::size_t begin = c * detail::kChunkSize;
        std::size_t end = std::min(begin + detail::kChunkSize, n);
        body(c, begin, end);
    };

    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                run_chunk(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (failure) std::rethrow_exception(failure);
}

}  // namespace dgg
