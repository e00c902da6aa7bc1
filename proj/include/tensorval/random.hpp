#pragma once

#include <cstdint>

namespace tensorval {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based substream seed: a pure function of (master, stream, counter).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (counter * 0xd1b54a32d192ed03ULL));
}

inline constexpr std::uint64_t kDefaultSeed = 20140715;

}  // namespace tensorval
