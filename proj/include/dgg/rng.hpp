#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dgg {

// Counter-based RNG discipline: every (seed, index...) tuple hashes to an
// independent stream, so trial i can be evaluated on any thread, in any
// order, and still produce the same draws. splitmix64 is the workhorse:
// it passes BigCrush-level smoke tests and costs a handful of arithmetic
// ops per output.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t state) noexcept : state_(state) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1), 53-bit resolution
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_unit();
    }

    bool bernoulli(double p) noexcept { return next_unit() < p; }

    // integer in [0, m), m > 0
    std::uint64_t next_below(std::uint64_t m) noexcept {
        return next_u64() % m;
    }

    // Box-Muller; consumes exactly two draws per call so stream positions
    // stay predictable.
    double gaussian() noexcept {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

template <class... Index>
RngStream derive_stream(std::uint64_t seed, Index... index) noexcept {
    std::uint64_t h = mix64(seed);
    ((h = hash_combine(h, static_cast<std::uint64_t>(index))), ...);
    return RngStream(h);
}

}  // namespace dgg
