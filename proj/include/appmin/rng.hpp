#pragma once

#include <cstdint>
#include <random>

namespace appmin {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream tags. Every consumer of a run seed draws from its own tag.
namespace stream_tag {
inline constexpr std::uint64_t sampler = 1;
inline constexpr std::uint64_t initial_point = 2;
inline constexpr std::uint64_t halton_scramble = 3;
inline constexpr std::uint64_t bound_check = 4;
inline constexpr std::uint64_t differential_evolution = 5;
inline constexpr std::uint64_t monte_carlo = 6;
}  // namespace stream_tag

}  // namespace appmin
