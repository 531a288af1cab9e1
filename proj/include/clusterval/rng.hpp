#pragma once

#include <cstdint>
#include <random>

namespace clusterval {

// All randomized routines draw from std::mt19937_64, whose output stream is
// fully specified by the C++ standard and therefore identical on every
// platform. Bounded draws below avoid std::uniform_int_distribution, which
// is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed for substream `index` of stream `stream` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + index);
}

/// Uniform draw from {0, ..., bound-1} by rejection; portable across platforms.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Uniform double in [0,1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace clusterval
