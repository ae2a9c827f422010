#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace dgg {

// Worker cap: DG_GAUGE_THREADS when set to a positive integer, otherwise
// the hardware concurrency. Re-read on every call so tests can flip it.
std::size_t thread_cap();

// Splits [0, n) into fixed-size chunks and runs `body(chunk, begin, end)`
// on a worker pool. Chunk boundaries never depend on the worker count, so
// any reduction that combines per-chunk results in chunk order is
// bit-identical no matter how many threads ran.
void for_each_chunk(
    std::size_t n,
    const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

namespace detail {
inline constexpr std::size_t kChunkSize = 1 << 14;

inline std::size_t chunk_count(std::size_t n) {
    return (n + kChunkSize - 1) / kChunkSize;
}
}  // namespace detail

// Deterministic parallel sum of f(i) over [0, n).
template <class F>
double parallel_sum(std::size_t n, F&& f) {
    std::vector<double> partial(detail::chunk_count(n), 0.0);
    for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += f(i);
        partial[chunk] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Sum of f(i) and f(i)^2 in one pass.
template <class F>
std::pair<double, double> parallel_sum2(std::size_t n, F&& f) {
    std::vector<std::pair<double, double>> partial(detail::chunk_count(n), {0.0, 0.0});
    for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            double v = f(i);
            s += v;
            s2 += v * v;
        }
        partial[chunk] = {s, s2};
    });
    double total = 0.0, total2 = 0.0;
    for (auto& [s, s2] : partial) {
        total += s;
        total2 += s2;
    }
    return {total, total2};
}

// Number of i in [0, n) with f(i) true.
template <class F>
std::size_t parallel_count(std::size_t n, F&& f) {
    std::vector<std::size_t> partial(detail::chunk_count(n), 0);
    for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        std::size_t c = 0;
        for (std::size_t i = begin; i < end; ++i) {
            if (f(i)) ++c;
        }
        partial[chunk] = c;
    });
    std::size_t total = 0;
    for (std::size_t c : partial) total += c;
    return total;
}

}  // namespace dgg
