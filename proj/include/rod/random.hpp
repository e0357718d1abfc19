#pragma once

// Seeded randomness. Every stream is a std::mt19937_64 seeded from a 64-bit
// value; child streams are derived by hashing (parent, tag...) with the
// SplitMix64 finalizer, so a stream's contents depend only on its position in
// the experiment tree and never on evaluation order.
//
// Normal variates use the Box-Muller transform on two 53-bit uniforms, the
// cosine branch first and the cached sine branch second.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rod {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent) noexcept { return parent; }

template <class... Tags>
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag,
                                                  Tags... rest) noexcept {
    return derive_seed(splitmix64(splitmix64(parent) ^ tag), static_cast<std::uint64_t>(rest)...);
}

/// Tag for a real-valued key (noise level, sampling bound).
[[nodiscard]] inline std::uint64_t seed_tag(double x) noexcept {
    return std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    [[nodiscard]] double uniform01() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    [[nodiscard]] double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    [[nodiscard]] double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rod
