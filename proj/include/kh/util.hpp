#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace kh {

// Global worker cap for the few parallel loops in this library.  Results are
// deterministic for any setting: work splits into contiguous chunks whose
// partials are combined in chunk order.
int max_threads();
void set_max_threads(int n);

template <class T, class ChunkFn, class CombineFn>
T parallel_map_reduce(std::int64_t begin, std::int64_t end, T init, ChunkFn chunk, CombineFn combine) {
    const std::int64_t n = end - begin;
    int workers = max_threads();
    if (n <= 0) return init;
    if (workers > n) workers = int(n);
    if (workers <= 1) return combine(std::move(init), chunk(begin, end));

    std::vector<T> partial;
    partial.resize(std::size_t(workers));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        std::int64_t b = begin + n * w / workers;
        std::int64_t e = begin + n * (w + 1) / workers;
        pool.emplace_back([&partial, w, b, e, &chunk] { partial[std::size_t(w)] = chunk(b, e); });
    }
    for (auto& t : pool) t.join();
    T acc = std::move(init);
    for (auto& part : partial) acc = combine(std::move(acc), std::move(part));
    return acc;
}

// SplitMix64-style stateless mixer; the basis of every seeded stream here.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ 0x632be59bd9b4e019ull ^ (mix64(b) + 0x9e3779b97f4a7c15ull));
}

// Uniform residue in {0,...,p-1} from a keyed counter, rejection sampled so
// the distribution is exactly uniform.
inline std::uint16_t uniform_residue(std::uint64_t key, std::uint64_t counter, std::uint32_t p) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % p;
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t v = mix64(key, counter * 0x100 + attempt);
        if (v < limit) return std::uint16_t(v % p);
    }
}

} // namespace kh
