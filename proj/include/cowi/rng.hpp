#pragma once
/*
Counter-based randomness built on the SplitMix64 output function.

A stream is identified by a 64-bit key; draw number c of the stream is
mix64(key + (c+1)·γ) with γ the SplitMix64 golden-ratio increment. This is
exactly the SplitMix64 sequence started from state `key`, so every draw can be
computed directly from (key, counter) without sequential state. Keys for
sub-streams are derived by hashing (seed, tag, a, b) through mix64.

Everything is integer arithmetic on uint64, so streams are bit-identical on
every platform.
*/

#include <cstdint>
#include <initializer_list>

namespace cowi::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives a stream key from a seed and any number of integer labels.
inline constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t k = mix64(seed + golden_gamma);
    for (auto l : labels) k = mix64(k ^ mix64(l + golden_gamma));
    return k;
}

inline constexpr std::uint64_t draw_bits(std::uint64_t key, std::uint64_t counter) {
    return mix64(key + (counter + 1) * golden_gamma);
}

// Uniform double in [0, 1) with 53 random bits.
inline constexpr double to_unit(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

// Sequential view over one stream; satisfies UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    constexpr explicit Stream(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    constexpr result_type operator()() { return draw_bits(key_, counter_++); }

    constexpr double uniform() { return to_unit((*this)()); }
    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound) by rejection (unbiased).
    constexpr std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        for (;;) {
            const auto x = (*this)();
            if (x < limit) return x % bound;
        }
    }

    constexpr std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace cowi::rng
