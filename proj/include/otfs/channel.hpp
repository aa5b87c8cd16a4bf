#pragma once

#include <string>
#include <vector>

#include "otfs/grid.hpp"
#include "otfs/random.hpp"
#include "otfs/window.hpp"

namespace otfs {

/// One propagation path: delay tau = delay_idx/(M df), Doppler
/// nu = (doppler_idx + doppler_frac)/(N T).
struct ChannelPath {
    cplx gain;
    int delay_idx = 0;
    int doppler_idx = 0;
    double doppler_frac = 0.0;  // strictly inside (-0.5, 0.5)
    double mean_power = 0.0;    // E|gain|^2 under the generating profile

    double doppler() const { return doppler_idx + doppler_frac; }
};

struct DDChannel {
    GridDims dims;
    std::vector<ChannelPath> paths;

    void validate() const;
};

struct ChannelGenConfig {
    int num_paths = 5;
    int k_max = 3;
    int l_max = 4;
    double pdp_decay = 0.1;

    void validate(const GridDims& dims) const;
};

/// h_w[k,l], indexed modulo N (Doppler) and M (delay).
struct EffectiveChannel {
    GridDims dims;
    CMatrix values;

    const cplx& at(long long k, long long l) const { return values.wrapped(k, l); }
};

/// Normalized exponential profile over the given delays,
/// q_i = exp(-decay l_i) / sum_j exp(-decay l_j).
std::vector<double> exponential_profile(const std::vector<int>& delays, double decay);

/// P paths on distinct (delay, Doppler) cells drawn uniformly, fractional
/// Doppler uniform in (-0.5, 0.5), gains CN(0, q) from the exponential profile.
DDChannel gen_channel(const ChannelGenConfig& cfg, const GridDims& dims, Rng& rng);

EffectiveChannel effective_channel(const DDChannel& ch, const SeparableWindow& tx,
                                   const SeparableWindow& rx);

/// H~[n,m] under ideal bi-orthogonal pulses.
TFGrid tf_effective_channel(const DDChannel& ch, const GridDims& dims);

/// Rows path_idx,gain_re,gain_im,delay_idx,doppler_idx,doppler_frac.
std::string channel_csv(const DDChannel& ch);

}  // namespace otfs
