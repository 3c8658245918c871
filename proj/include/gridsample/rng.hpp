#pragma once

#include <cstdint>
#include <random>

namespace gridsample {

// Deterministic random source. The core engine is std::mt19937_64, whose
// seeding and output sequence are fixed by the standard, so traces
// reproduce across platforms. All derived draws (uniform indices, unit
// doubles, normals) are implemented here rather than via <random>
// distributions, whose outputs are implementation-defined.
//
// Stream splitting: substream k of base seed s is seeded with
// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15). Convention used by the
// CLI and the comparison harness: stream 0 = building-dense stratum,
// stream 1 = building-sparse stratum.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t splitmix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
        return splitmix64(base + (stream + 1) * 0x9E3779B97F4A7C15ull);
    }

    static Rng stream(std::uint64_t base, std::uint64_t stream_index) {
        return Rng(stream_seed(base, stream_index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n). Rejection sampling keeps the
    // draw exact for any n.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    // Standard normal via Box-Muller; the second value of each pair is
    // cached so draws cost one pair of uniforms every other call.
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace gridsample
