#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace opuczeros::rng {

/// 64-bit avalanche finalizer (Stafford mix13, the splitmix64 output stage).
inline std::uint64_t mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

/// Word `index` of the stream keyed by (seed, trial). Pure function of its
/// arguments, so any word is addressable in O(1) and streams never overlap by
/// construction rather than by bookkeeping.
inline std::uint64_t stream_word(std::uint64_t seed, std::uint64_t trial,
                                 std::uint64_t index) noexcept {
    std::uint64_t key = mix(seed + 0x9e3779b97f4a7c15ull);
    key = mix(key + 0xd1342543de82ef95ull * trial);
    return mix(key + 0x9e3779b97f4a7c15ull * index);
}

/// Top 53 bits mapped to (0, 1]; the +1 keeps log() finite below.
inline double uniform_open(std::uint64_t word) noexcept {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

/// Top 53 bits mapped to [0, 1).
inline double uniform_halfopen(std::uint64_t word) noexcept {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Box-Muller: u1 in (0,1], u2 in [0,1) to two independent N(0,1) draws via
/// r = sqrt(-2 ln u1), angle = 2 pi u2.
inline std::pair<double, double> standard_normal_pair(std::uint64_t w1,
                                                      std::uint64_t w2) noexcept {
    const double u1 = uniform_open(w1);
    const double u2 = uniform_halfopen(w2);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace opuczeros::rng
