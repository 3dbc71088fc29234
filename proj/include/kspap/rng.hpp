#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kspap {

// splitmix64; used to derive independent child seeds from a master seed so
// that parallel trials stay deterministic regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child seed for a named subsystem (FNV-1a over the tag, mixed with master).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::uint64_t s = master ^ h;
    return splitmix64(s);
}

// Per-trial seed inside a Monte-Carlo run.
inline std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t trial) {
    std::uint64_t s = run_seed + 0x632be59bd9b4e019ULL * (trial + 1);
    return splitmix64(s);
}

using Rng = std::mt19937_64;

}  // namespace kspap
