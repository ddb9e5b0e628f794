#pragma once

#include <cstdint>
#include <limits>

namespace causal {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Keyed combination used for every derived stream: trial seeds, tree
// indices in the half-plane, and per-vertex offspring draws.
constexpr std::uint64_t mix64(std::uint64_t key, std::uint64_t index) {
    return mix64(key ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// SplitMix64 stream. Satisfies UniformRandomBitGenerator; seeding is O(1),
// which matters because the lazy maps open one stream per vertex.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    Rng split(std::uint64_t index) const { return Rng(mix64(state_, index)); }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return mix64(master_seed, trial_index);
}

}  // namespace causal
