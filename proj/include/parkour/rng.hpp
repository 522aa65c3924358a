// Deterministic random number generation. Every stochastic component draws
// from an explicitly seeded stream so runs replay bit-identically regardless
// of thread scheduling or platform libm differences.
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace parkour {

// SplitMix64 step; used for seeding and for deriving child-stream seeds.
inline std::uint64_t split_mix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a salt list
// (e.g. {tag, generation, genome_index, trial_index}).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t h = base;
    split_mix64(h);
    for (std::uint64_t s : salts) {
        h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        split_mix64(h);
    }
    return h;
}

// Stream tags used by derive_seed so unrelated streams never collide.
enum : std::uint64_t {
    kSeedTagInit = 0x01,
    kSeedTagBreed = 0x02,
    kSeedTagEval = 0x03,
    kSeedTagCourse = 0x04,
    kSeedTagTrial = 0x05,
    kSeedTagChampion = 0x06,
};

// xoshiro256++ engine with hand-rolled double/gaussian sampling, so output
// does not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = split_mix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform_double(); }

    // Uniform integer in [0, n); n must be nonzero.
    std::uint64_t uniform_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller. One draw per call, no cached spare,
    // which keeps the stream position a pure function of the call count.
    double gaussian();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace parkour
