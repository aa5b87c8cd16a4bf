#include "otfs/link.hpp"

#include <stdexcept>

#include "otfs/transform.hpp"

namespace otfs {

void FrameConfig::validate() const {
    dims.validate();
    if (!tx_window.matches(dims) || !rx_window.matches(dims)) {
        throw std::invalid_argument("frame windows do not match grid dims");
    }
    if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
}

namespace {

void check_inputs(const DDGrid& x, const GridDims& ch_dims, const FrameConfig& cfg) {
    cfg.validate();
    if (!(x.dims == cfg.dims) || !(ch_dims == cfg.dims)) {
        throw std::invalid_argument("frame, data and channel dims differ");
    }
}

}  // namespace

RxFrame simulate_frame_tf(const DDGrid& x, const DDChannel& ch, const FrameConfig& cfg, Rng& rng) {
    check_inputs(x, ch.dims, cfg);
    const TFGrid h_tf = tf_effective_channel(ch, cfg.dims);

    TFGrid tx = apply_tf_window(isfft(x), cfg.tx_window);
    for (std::size_t n = 0; n < cfg.dims.n_doppler; ++n) {
        for (std::size_t m = 0; m < cfg.dims.m_delay; ++m) tx(n, m) *= h_tf(n, m);
    }
    const auto noise_tf = draw_noise_grid<TFGrid>(cfg.dims, cfg.noise_variance, rng);

    RxFrame out;
    out.signal_part = sfft(apply_tf_window(tx, cfg.rx_window));
    out.noise_part = sfft(apply_tf_window(noise_tf, cfg.rx_window));
    out.dd_received = out.signal_part + out.noise_part;
    return out;
}

RxFrame simulate_frame_dd(const DDGrid& x, const EffectiveChannel& heff, const FrameConfig& cfg,
                          Rng& rng) {
    check_inputs(x, heff.dims, cfg);
    const auto noise_tf = draw_noise_grid<TFGrid>(cfg.dims, cfg.noise_variance, rng);

    RxFrame out;
    out.signal_part = DDGrid(cfg.dims, circular_convolve(x.values, heff.values));
    if (cfg.noise_variance == 0.0) {
        out.noise_part = DDGrid(cfg.dims);
    } else {
        const DDGrid white = sfft(noise_tf);
        out.noise_part =
            DDGrid(cfg.dims, circular_convolve(white.values, noise_filter_matrix(cfg.rx_window)));
    }
    out.dd_received = out.signal_part + out.noise_part;
    return out;
}

RxFrame simulate_frame_dd(const DDGrid& x, const DDChannel& ch, const FrameConfig& cfg, Rng& rng) {
    check_inputs(x, ch.dims, cfg);
    return simulate_frame_dd(x, effective_channel(ch, cfg.tx_window, cfg.rx_window), cfg, rng);
}

}  // namespace otfs
