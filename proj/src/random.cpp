#include "otfs/random.hpp"

#include <array>

namespace otfs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng resolve_seed(std::uint64_t master_seed, std::uint64_t frame_idx) {
    const std::uint64_t a = splitmix64(master_seed);
    const std::uint64_t b = splitmix64(frame_idx ^ 0x6a09e667f3bcc909ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(frame_idx), static_cast<std::uint32_t>(frame_idx >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

}  // namespace otfs
