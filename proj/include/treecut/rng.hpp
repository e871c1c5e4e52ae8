#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace treecut {

/// SplitMix64 stream. Fully specified 64-bit generator, so instances and
/// experiments reproduce bit-identically across platforms and standard
/// library versions. Uniform doubles take the top 53 bits of the state
/// output; normals use Box-Muller on two fresh uniforms (no caching, so a
/// stream's n-th draw never depends on how earlier draws were typed).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Normal(mean, stddev). stddev == 0 returns mean exactly but still
    /// consumes two uniforms.
    double normal(double mean, double stddev) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * (mag * std::cos(2.0 * std::numbers::pi * u2));
    }

private:
    std::uint64_t state_;
};

/// Deterministic combiner for deriving per-purpose substream seeds from a
/// master seed plus labels (problem family, size, indices, ...).
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x243F6A8885A308D3ull;  // arbitrary nonzero start
    for (std::uint64_t p : parts) {
        h ^= p + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        SplitMix64 s(h);
        h = s.next_u64();
    }
    return h;
}

/// Stable label hash for strings used in seed derivation (FNV-1a).
inline std::uint64_t hash_label(const char* s) {
    std::uint64_t h = 1469598103934665603ull;
    for (; *s != '\0'; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace treecut
