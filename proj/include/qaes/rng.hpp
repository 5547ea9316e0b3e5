#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace qaes {

// SplitMix64 step; used to derive independent sub-seeds from one seed.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the seed for sub-stream `stream` of `seed`. Deterministic and
// platform independent.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
    splitmix64(state);
    return splitmix64(state);
}

// Seeded random source with platform-independent draws.
//
// std::mt19937_64's output sequence is fixed by the standard, but the
// standard distributions are not, so every draw below is derived from raw
// engine output only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    unsigned bit() { return static_cast<unsigned>(engine_() >> 63); }

    std::uint8_t byte() { return static_cast<std::uint8_t>(engine_() >> 56); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform in [0, bound); bound > 0. Rejection sampling keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qaes
