#pragma once

// Reproducible random streams.
//
// Every stochastic quantity in the library is drawn from a std::mt19937_64
// engine whose seed is derived from a user seed plus a tuple of stream ids
// (pair id, window index, surrogate index, ...). Derivation folds each id
// into the state with the SplitMix64 finalizer, so streams are independent of
// scheduling order. Bounded integers and unit-interval doubles are produced
// here rather than through <random> distributions, whose output is not
// specified by the standard and differs between library implementations.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace recurconnect {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// seed' = mix(...mix(mix(seed) ^ id0) ^ id1 ...)
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> ids) noexcept {
    std::uint64_t state = splitmix64(seed);
    for (std::uint64_t id : ids) state = splitmix64(state ^ splitmix64(id + 0x632be59bd9b4e019ULL));
    return state;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., bound - 1}; bound must be positive. Lemire's
    /// multiply-and-reject method, unbiased.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (one value per call; the pair's second
    /// half is discarded so the stream position depends only on call count).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace recurconnect
