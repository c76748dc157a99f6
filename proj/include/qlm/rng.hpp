#pragma once

// Seed derivation and the per-trial random source.
//
// Trial seeds are derived from the master seed in counter mode:
// mix_seed(master, i) is the (i+1)-th output of a SplitMix64 stream whose
// state starts at master. The derivation is documented so that other
// implementations can reproduce the trial partitioning even if their draw
// streams differ.

#include <cstdint>
#include <random>

namespace qlm {

/// Counter-mode SplitMix64: deterministic 64-bit hash of (master, counter).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Random source owned by exactly one trial at a time. Wraps std::mt19937_64
/// (fully specified by the standard) and converts raw words itself, so the
/// stream does not depend on the standard library's distribution internals.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits; consumes exactly one word.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [a,b); consumes exactly one word.
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform on {0,...,k-1} for k a power of two; consumes exactly one word.
    int uniform_pow2(int k) { return static_cast<int>(engine_() & static_cast<std::uint64_t>(k - 1)); }

private:
    std::mt19937_64 engine_;
};

} // namespace qlm
