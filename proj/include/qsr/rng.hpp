#pragma once

#include <cstdint>
#include <random>

namespace qsr {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One independent stream per (master seed, index). Batch records derived this
// way are order-independent, so sharded runs reproduce serial runs exactly.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x51ed270b7a2cbd1fULL));
}

inline std::mt19937_64 stream_for(uint64_t master, uint64_t index) {
    return std::mt19937_64(derive_seed(master, index));
}

// Canonical uniform in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qsr
