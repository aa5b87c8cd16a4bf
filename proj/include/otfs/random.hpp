#pragma once

#include <cstdint>
#include <random>

#include "otfs/grid.hpp"

namespace otfs {

using Rng = std::mt19937_64;

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline cplx complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {s * re, s * im};
}

/// Independent generator for (master_seed, frame_idx). Injective in both
/// arguments: the pair is mixed through a seed sequence before seeding.
Rng resolve_seed(std::uint64_t master_seed, std::uint64_t frame_idx);

}  // namespace otfs
