#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace ghost {

// Counter-based randomness: every draw is a pure function of
// (seed, stream tag, index, counter), so results never depend on call order
// or on how work is split across threads.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
    pattern = 0x70617474ULL,
    speckle = 0x7370656bULL,
    noise = 0x6e6f6973ULL,
    retrieval = 0x72657472ULL,
};

constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
    return mix64(mix64(seed ^ static_cast<std::uint64_t>(stream)) + index);
}

/// Random bits for position `counter` under `key`.
constexpr std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix64(key ^ mix64(counter));
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential view over one keyed stream; satisfies UniformRandomBitGenerator
/// so it can drive <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return counter_bits(key_, counter_++); }

    double uniform() noexcept { return to_unit((*this)()); }

    /// Standard normal via Box-Muller (one value per call, two uniforms).
    double normal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ghost
