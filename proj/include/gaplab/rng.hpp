#pragma once

#include <cstdint>
#include <random>

namespace gaplab {

// splitmix64 finalizer, used to derive independent substreams from a base
// seed and a task index without correlating the mt19937_64 states.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index = 0) {
    return mix64(mix64(seed ^ mix64(stream)) + index);
}

// All randomness in the project flows through this engine type. mt19937_64 is
// fully specified by the standard, so streams are bit-identical across
// platforms and standard libraries.
using Engine = std::mt19937_64;

inline Engine make_engine(uint64_t seed) { return Engine(seed); }

// Uniform double in [0,1) from the top 53 bits. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double next_unit(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound). Plain modulo: the bias at our bounds
// (< 2^32) is < 2^-32 and determinism matters more here.
inline uint64_t next_below(Engine& eng, uint64_t bound) {
    return eng() % bound;
}

}  // namespace gaplab
