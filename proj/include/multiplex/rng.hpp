#pragma once

#include <cstdint>
#include <random>

namespace multiplex {

/// splitmix64 step; used to derive independent replica seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for replica `index` of a run seeded with `base`.
inline std::uint64_t replica_seed(std::uint64_t base, std::uint32_t index) {
    std::uint64_t s = base + 0x632be59bd9b4e019ULL * (index + 1);
    return splitmix64(s);
}

/// Deterministic random stream.
///
/// Wraps std::mt19937_64 (bit-exact by the standard) and maps its output to
/// uniforms with fixed algorithms, so identical seeds give identical draw
/// sequences on every platform. std::uniform_*_distribution is avoided on
/// purpose: its output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n >= 1. Lemire's multiply-shift with
    /// rejection of the biased band.
    std::uint64_t uniform_below(std::uint64_t n) {
        while (true) {
            std::uint64_t x = engine_();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0ULL - n) % n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace multiplex
