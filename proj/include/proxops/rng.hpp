#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace proxops {

// splitmix64 finalizer; bijective mixer used to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Seed for a named substream of a master seed. Components (env resets,
/// policy init, action sampling, minibatch shuffling, bootstrap) each draw
/// from their own stream so they can be reproduced in isolation.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
    return mix64(mix64(master ^ fnv1a64(name)) + index);
}

/// Deterministic random source. All draws are hand-rolled on top of
/// mt19937_64 so that sequences are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; consumes exactly two raw draws.
    double normal() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Unbiased integer in [0, n); n must be positive.
    std::uint64_t integer(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace proxops
