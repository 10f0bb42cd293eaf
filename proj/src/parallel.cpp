#include "revca/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace revca {

unsigned worker_count() {
    if (const char* env = std::getenv("REVCA_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<unsigned>(std::min<long>(n, 1024));
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(std::uint64_t count, std::uint64_t chunks,
                     const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& body) {
    if (count == 0) return;
    chunks = std::clamp<std::uint64_t>(chunks, 1, count);
    const auto bounds = [&](std::uint64_t c) {
        // Balanced split without overflow for count up to 2^63.
        const std::uint64_t q = count / chunks, r = count % chunks;
        return c * q + std::min(c, r);
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= chunks) return;
                try {
                    body(c, bounds(c), bounds(c + 1));
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(chunks);
                    return;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace revca
