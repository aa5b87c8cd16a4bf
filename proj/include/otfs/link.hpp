#pragma once

#include "otfs/channel.hpp"
#include "otfs/grid.hpp"
#include "otfs/random.hpp"
#include "otfs/window.hpp"

namespace otfs {

struct FrameConfig {
    GridDims dims;
    SeparableWindow tx_window;
    SeparableWindow rx_window;
    double noise_variance = 0.0;  // N0; SNR = 1/N0

    void validate() const;
};

/// Demodulated frame split into its signal and noise contributions.
struct RxFrame {
    DDGrid dd_received;
    DDGrid signal_part;
    DDGrid noise_part;
};

/// i.i.d. CN(0, variance) entries; real and imaginary parts N(0, variance/2).
template <class GridT>
GridT draw_noise_grid(const GridDims& dims, double variance, Rng& rng) {
    if (!(variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
    GridT g(dims);
    if (variance == 0.0) return g;
    for (auto& v : g.values.flat()) v = complex_gaussian(rng, variance);
    return g;
}

/// ISFFT, TX window, pointwise TF channel plus white TF noise, RX window, SFFT.
RxFrame simulate_frame_tf(const DDGrid& x, const DDChannel& ch, const FrameConfig& cfg, Rng& rng);

/// Circular convolution with the effective channel, plus white noise filtered
/// by v_z. The noise is drawn in the TF domain with the same RNG consumption
/// as simulate_frame_tf, so both paths agree for a shared seed.
RxFrame simulate_frame_dd(const DDGrid& x, const DDChannel& ch, const FrameConfig& cfg, Rng& rng);

/// Same as simulate_frame_dd with a precomputed effective channel.
RxFrame simulate_frame_dd(const DDGrid& x, const EffectiveChannel& heff, const FrameConfig& cfg,
                          Rng& rng);

}  // namespace otfs
