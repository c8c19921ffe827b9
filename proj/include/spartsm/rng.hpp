#pragma once

#include <cstdint>
#include <random>

namespace spartsm {

// splitmix64 step; used to decorrelate child generator seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent child seed for replication/stream `index` of a root seed.
// Parallel replications each construct their own generator from this,
// so results do not depend on scheduling.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root ^ splitmix64(index + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace spartsm
