#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace irtforge {

// Respondents are split into chunks of this fixed size regardless of the
// worker count. Callers reduce per-chunk partials in chunk order, so results
// are bit-identical for any number of threads.
inline constexpr std::size_t kChunkSize = 64;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

// Runs fn(chunk) for every chunk in [0, n_chunks) on at most `threads`
// workers. The first exception thrown by any worker is rethrown.
template <class Fn>
void for_each_chunk(std::size_t n_chunks, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n_chunks, 1));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < n_chunks; c += workers) fn(c);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace irtforge
