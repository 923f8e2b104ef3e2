#pragma once

#include <cstdint>

namespace travnet {

/// One step of the splitmix64 generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent child seed for stream `stream` of a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Stream ids used across the library.
namespace seed_stream {
inline constexpr std::uint64_t model_init = 1;
inline constexpr std::uint64_t domain_init = 2;
inline constexpr std::uint64_t split = 3;
inline constexpr std::uint64_t regression_batches = 4;
inline constexpr std::uint64_t domain_batches = 5;
inline constexpr std::uint64_t scene_geometry = 6;
inline constexpr std::uint64_t scene_appearance = 7;
}  // namespace seed_stream

}  // namespace travnet
