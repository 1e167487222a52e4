#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffnet {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// seed = mix(mix(mix(master) ^ a) ^ b)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(mix64(master) ^ a) ^ b);
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Calls fn(i) for every i in [0, count). Work is claimed dynamically, so
/// callers must write results into per-index slots and aggregate afterwards.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < count; i = next++)
                fn(i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace ffnet
