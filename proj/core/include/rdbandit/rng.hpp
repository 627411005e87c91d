#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rdbandit {

// SplitMix64 generator (Steele, Lea & Flood). Satisfies
// UniformRandomBitGenerator so it composes with <random> distributions.
// Streams are derived from a master seed and a key path, so every
// (trial, purpose, ...) tuple gets an independent, reproducible sequence.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
        std::uint64_t h = mix(master ^ 0x6a09e667f3bcc909ULL);
        for (std::uint64_t k : keys) h = mix(h ^ mix(k + 0x9e3779b97f4a7c15ULL));
        return Rng(h);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Purposes used as the first key when deriving streams.
enum class StreamPurpose : std::uint64_t {
    Environment = 1,
    Reward = 2,
    Agent = 3,
    TargetComparison = 4,
};

inline std::uint64_t key(StreamPurpose p) noexcept { return static_cast<std::uint64_t>(p); }

} // namespace rdbandit
