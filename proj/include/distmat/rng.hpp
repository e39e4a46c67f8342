#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "distmat/common.hpp"

namespace distmat {

// Seeding domains keep independent uses of the same user seed (permutation
// rows, synthetic matrix streams) from colliding on identical substreams.
enum class RngDomain : std::uint32_t {
    permutation = 0x9e3779b9u,
    synthesis = 0xd5a61263u,
};

// Deterministic per-(seed, domain, stream) engine. Streams are independent
// by construction, so work split across streams is reproducible regardless
// of how many workers consume them.
inline std::mt19937_64 make_engine(std::uint64_t seed, RngDomain domain, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(domain),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
    return std::mt19937_64(seq);
}

// Unbiased draw from [0, bound) by rejection. Hand-rolled because the
// standard distributions are implementation-defined; this keeps permutation
// tables identical across standard libraries for a given seed.
inline std::uint64_t bounded_uint(std::mt19937_64& eng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t r = eng();
        if (r >= threshold) return r % bound;
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace distmat
