#ifndef RANDPROD_RNG_HPP
#define RANDPROD_RNG_HPP

#include <cstdint>
#include <random>

namespace randprod {

// SplitMix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives a well-separated engine seed for worker `stream` of a run seeded
// with `seed`. Every parallel kernel draws its per-item randomness from
// (seed, item index), so results do not depend on thread count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed + 0x632be59bd9b4e019ULL) ^ splitmix64(stream));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(derive_stream(seed, stream));
}

}  // namespace randprod

#endif
