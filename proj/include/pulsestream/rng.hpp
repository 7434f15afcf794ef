#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pulsestream {

/// SplitMix64 finalizer. Used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Reproducible random source.
 *
 * The bit stream is std::mt19937_64. Uniform doubles take the top 53
 * bits; Gaussians use the Box-Muller transform with the cosine branch
 * only, so every standard library produces the same sequence.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::int64_t below(std::int64_t n) {
        // Rejection removes the modulo bias.
        const auto un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % un;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::int64_t>(r % un);
    }

    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// +1 or -1 with equal probability.
    double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace pulsestream
