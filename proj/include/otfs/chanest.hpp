#pragma once

#include <string>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/grid.hpp"
#include "otfs/random.hpp"
#include "otfs/window.hpp"

namespace otfs {

/**
 * Embedded single-pilot layout.
 *
 * The pilot sits at [k_p, l_p]. The Doppler guard covers
 * k_p - 2 k_max - 2 k_hat ... k_p + 2 k_max + 2 k_hat (modulo N) and the delay
 * guard l_p - l_max ... l_p + l_max, which must fit in [0, M) without wrapping.
 */
struct PilotConfig {
    int k_p = 10;
    int l_p = 15;
    double pilot_power = 1000.0;  // |x_p|^2, linear
    int k_max = 3;
    int l_max = 4;
    int k_hat = 0;

    static PilotConfig centred(const GridDims& dims, int k_max, int l_max, int k_hat,
                               double pilot_power);

    static int max_k_hat(std::size_t n_doppler, int k_max);

    void validate(const GridDims& dims) const;

    double pilot_amplitude() const;
    int doppler_guard_size() const { return 4 * k_max + 4 * k_hat + 1; }
    int delay_guard_size() const { return 2 * l_max + 1; }
    /// (2 l_max + 1)(4 k_max + 4 k_hat + 1)
    int overhead_symbols() const { return delay_guard_size() * doppler_guard_size(); }
    int window_rows() const { return 2 * k_max + 2 * k_hat + 1; }
    int window_cols() const { return l_max + 1; }
    int window_k_begin() const { return k_p - k_max - k_hat; }
    bool full_guard(std::size_t n_doppler) const {
        return doppler_guard_size() >= static_cast<int>(n_doppler);
    }
    /// True when Doppler row k (any integer, reduced modulo N) lies in the guard set.
    bool in_doppler_guard(long long k, std::size_t n_doppler) const;
};

double dbw_to_linear(double dbw);

/// Unit-power QPSK symbols on every cell.
DDGrid qpsk_grid(const GridDims& dims, Rng& rng);

/// Unit-average-power square QAM of the given order (4, 16, 64, ...).
DDGrid qam_grid(const GridDims& dims, int order, Rng& rng);

DDGrid embed_pilot(const DDGrid& data, const PilotConfig& cfg);

struct EstimationReport {
    /// estimate(r, c) is h_w estimated at Doppler lag (k - k_p) and delay lag
    /// c, with k = k_p - k_max - k_hat + r.
    CMatrix estimate;
    double empirical_mse = 0.0;
    double analytic_floor = 0.0;
    int overhead_symbols = 0;

    /// empirical_mse divided by the window cell count.
    double per_cell_mse() const;
};

/// Threshold estimator: y[k,l]/x_p where |y| >= 3 sqrt(N0), zero elsewhere.
EstimationReport estimate(const DDGrid& rx, const PilotConfig& cfg, double noise_variance);

/// Sum over the estimation window of |h_w - h_w_hat|^2.
double empirical_mse(const EffectiveChannel& true_heff, const EstimationReport& report,
                     const PilotConfig& cfg);

/// Data interference I[k,l] reaching window cell (k, l) (absolute indices).
cplx interference_exact(const DDGrid& x, const EffectiveChannel& heff, const PilotConfig& cfg,
                        long long k, long long l);

/// E|I[k,l]|^2 averaged over unit-power data and independent path gains, using
/// each path's mean_power as E|h_i|^2. Requires rectangular delay windows.
double interference_power_exact(const DDChannel& ch, const SeparableWindow& tx,
                                const SeparableWindow& rx, const PilotConfig& cfg, long long k);

/// (N - 4 k_max - 4 k_hat - 1) SL^2.
double interference_power_approx(const PilotConfig& cfg, const GridDims& dims, double sidelobe_level);

/// High-SNR error floor of the window MSE:
/// (N - 4 k_max - 4 k_hat - 1)(2 k_max + 2 k_hat + 1)(l_max + 1) SL^2 / |x_p|^2.
double mse_floor(const PilotConfig& cfg, const GridDims& dims, double sidelobe_level);

struct KhatTrendRow {
    int k_hat;
    double floor;
    int overhead_symbols;
};

struct KhatTrend {
    /// (N - 8 k_max - 3) / 4; <= 0 means the floor falls monotonically in k_hat.
    double regime_boundary = 0.0;
    bool monotone_decreasing = false;
    std::vector<KhatTrendRow> rows;
};

KhatTrend khat_mse_trend(const GridDims& dims, int k_max, int l_max, double pilot_power,
                         double sidelobe_level);

}  // namespace otfs
