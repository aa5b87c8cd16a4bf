#pragma once

#include <cmath>

#include "otfs/grid.hpp"
#include "otfs/random.hpp"

namespace otfs::testing {

inline DDGrid random_dd(const GridDims& dims, Rng& rng) {
    DDGrid g(dims);
    for (auto& v : g.values.flat()) v = complex_gaussian(rng, 1.0);
    return g;
}

inline TFGrid random_tf(const GridDims& dims, Rng& rng) {
    TFGrid g(dims);
    for (auto& v : g.values.flat()) v = complex_gaussian(rng, 1.0);
    return g;
}

inline GridDims dims(std::size_t n, std::size_t m) { return GridDims{n, m, 5e3}; }

}  // namespace otfs::testing
