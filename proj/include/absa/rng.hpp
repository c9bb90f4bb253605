#pragma once

#include <cstdint>
#include <vector>

namespace absa {

/// Small deterministic generator with platform-independent output.
/// Used everywhere a seeded choice is made so results are reproducible
/// across compilers and across worker counts.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        // 128-bit multiply-shift; bias is at most 2^-64 per draw.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    bool next_bool() { return (next() >> 63) != 0; }

private:
    std::uint64_t state_;
};

/// Derives an independent stream for (seed, index). Sampling loops key each
/// sample's stream by its index so evaluation order and parallelism never
/// change the draws.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
    mix.next();
    return mix;
}

/// Collapses (seed, index) to a fresh 64-bit seed for APIs that take one.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return derive_stream(seed, index).next();
}

/// Seeded Fisher-Yates shuffle of indices [0, n).
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    SplitMix64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

}  // namespace absa
