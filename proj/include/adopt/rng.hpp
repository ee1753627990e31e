#pragma once

#include <cmath>
#include <cstdint>

#include "adopt/vec.hpp"

namespace adopt {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so parallel evaluation by index partitioning is
// bit-identical to the sequential order.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix3(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform on (0,1); never returns 0 or 1, so log() is safe.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    return uniform01(mix3(seed, stream, counter));
}

// Standard normal via Box-Muller, one value per (seed, stream, counter).
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
    double u1 = counter_uniform(seed, 2 * stream, counter);
    double u2 = counter_uniform(seed, 2 * stream + 1, counter);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Uniform direction on the positive-orthant unit sphere: component-wise
// |N(0,1)| then normalize. Stream j carries component j, counter is the
// sample index.
inline TaskVector positive_direction(std::size_t n, std::uint64_t seed,
                                     std::uint64_t sample_index) {
    TaskVector v(n);
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = std::abs(counter_normal(seed, j, sample_index));
        ss += v[j] * v[j];
    }
    double nrm = std::sqrt(ss);
    for (double& x : v) x /= nrm;
    return v;
}

// Sequential convenience wrapper for tests and restart draws.
struct RandomStream {
    std::uint64_t seed;
    std::uint64_t counter = 0;

    explicit RandomStream(std::uint64_t s) : seed(s) {}

    double uniform() { return counter_uniform(seed, 0, counter++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    double normal() { return counter_normal(seed, 1, counter++); }
    // Integer in [lo, hi] inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
    }
};

}  // namespace adopt
