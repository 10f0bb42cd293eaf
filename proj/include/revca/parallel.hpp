#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace revca {

// Worker count: REVCA_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Splits [0, count) into `chunks` contiguous ranges and runs `body(chunk,
// begin, end)` for each across worker_count() threads. Chunks are handed
// out in ascending order; the call returns once all have finished. The
// first exception thrown by a body is rethrown.
void parallel_chunks(std::uint64_t count, std::uint64_t chunks,
                     const std::function<void(std::uint64_t chunk, std::uint64_t begin,
                                              std::uint64_t end)>& body);

}  // namespace revca
