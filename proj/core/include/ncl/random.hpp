#pragma once

#include <cstdint>
#include <random>

namespace ncl {

// splitmix64 step; used to decorrelate (seed, stream) pairs before
// feeding them to the mersenne twister.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent generator for logical stream `stream` under a master seed.
// Repeats/folds/draws each get their own stream so they are
// order-independent and safe to run in parallel.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

} // namespace ncl
