#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace gffperc {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `key` of `parent`. Replica r of an experiment draws
/// from derive_seed(point_seed, r), so results do not depend on scheduling.
inline Seed derive_seed(Seed parent, std::uint64_t key)
{
    return splitmix64(splitmix64(parent) ^ splitmix64(key + 0x632be59bd9b4e019ULL));
}

/// Child seed keyed by a real parameter (e.g. the mesh size of a sweep point).
inline Seed derive_seed_for(Seed parent, double key)
{
    return derive_seed(parent, std::bit_cast<std::uint64_t>(key));
}

inline Rng make_rng(Seed seed) { return Rng(splitmix64(seed)); }

}  // namespace gffperc
