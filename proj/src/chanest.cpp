#include "otfs/chanest.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

PilotConfig PilotConfig::centred(const GridDims& dims, int k_max, int l_max, int k_hat,
                                 double pilot_power) {
    PilotConfig cfg;
    cfg.k_p = static_cast<int>(dims.n_doppler / 2);
    cfg.l_p = static_cast<int>(dims.m_delay / 2);
    cfg.k_max = k_max;
    cfg.l_max = l_max;
    cfg.k_hat = k_hat;
    cfg.pilot_power = pilot_power;
    return cfg;
}

int PilotConfig::max_k_hat(std::size_t n_doppler, int k_max) {
    const int spare = static_cast<int>(n_doppler) - 4 * k_max - 1;
    if (spare < 0) return -1;
    return spare / 4;
}

void PilotConfig::validate(const GridDims& dims) const {
    dims.validate();
    if (k_max < 0 || l_max < 0 || k_hat < 0) {
        throw std::invalid_argument("k_max, l_max and k_hat must be non-negative");
    }
    if (!(pilot_power > 0.0) || !std::isfinite(pilot_power)) {
        throw std::invalid_argument("pilot power must be positive");
    }
    if (k_p < 0 || static_cast<std::size_t>(k_p) >= dims.n_doppler) {
        throw std::invalid_argument("pilot Doppler index outside the grid");
    }
    const int limit = max_k_hat(dims.n_doppler, k_max);
    if (limit < 0) throw std::invalid_argument("Doppler guard 4 k_max + 1 exceeds N");
    if (k_hat > limit) throw std::invalid_argument("k_hat exceeds floor((N - 4 k_max - 1) / 4)");
    if (l_p - l_max < 0 || static_cast<std::size_t>(l_p + l_max) >= dims.m_delay) {
        throw std::invalid_argument("delay guard would wrap around the grid");
    }
}

double PilotConfig::pilot_amplitude() const { return std::sqrt(pilot_power); }

bool PilotConfig::in_doppler_guard(long long k, std::size_t n_doppler) const {
    if (full_guard(n_doppler)) return true;
    const auto N = static_cast<long long>(n_doppler);
    long long d = (k - k_p) % N;
    if (d < 0) d += N;
    const long long reach = 2LL * k_max + 2LL * k_hat;
    return d <= reach || d >= N - reach;
}

double dbw_to_linear(double dbw) { return std::pow(10.0, dbw / 10.0); }

DDGrid qpsk_grid(const GridDims& dims, Rng& rng) { return qam_grid(dims, 4, rng); }

DDGrid qam_grid(const GridDims& dims, int order, Rng& rng) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    if (order < 4 || side * side != order) {
        throw std::invalid_argument("QAM order must be a square of at least 4");
    }
    const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
    std::uniform_int_distribution<int> pick(0, side - 1);
    DDGrid g(dims);
    for (auto& v : g.values.flat()) {
        const int a = pick(rng);
        const int b = pick(rng);
        v = cplx{(2.0 * a - (side - 1)) * scale, (2.0 * b - (side - 1)) * scale};
    }
    return g;
}

DDGrid embed_pilot(const DDGrid& data, const PilotConfig& cfg) {
    cfg.validate(data.dims);
    DDGrid x = data;
    const std::size_t N = data.dims.n_doppler;
    for (std::size_t k = 0; k < N; ++k) {
        if (!cfg.in_doppler_guard(static_cast<long long>(k), N)) continue;
        for (int l = cfg.l_p - cfg.l_max; l <= cfg.l_p + cfg.l_max; ++l) {
            x(k, static_cast<std::size_t>(l)) = cplx{};
        }
    }
    x(static_cast<std::size_t>(cfg.k_p), static_cast<std::size_t>(cfg.l_p)) = cfg.pilot_amplitude();
    return x;
}

double EstimationReport::per_cell_mse() const {
    const auto cells = estimate.rows() * estimate.cols();
    return cells ? empirical_mse / static_cast<double>(cells) : 0.0;
}

EstimationReport estimate(const DDGrid& rx, const PilotConfig& cfg, double noise_variance) {
    if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
    cfg.validate(rx.dims);
    const double threshold = 3.0 * std::sqrt(noise_variance);
    const double xp = cfg.pilot_amplitude();

    EstimationReport report;
    report.estimate = CMatrix(static_cast<std::size_t>(cfg.window_rows()),
                              static_cast<std::size_t>(cfg.window_cols()));
    report.overhead_symbols = cfg.overhead_symbols();
    for (int r = 0; r < cfg.window_rows(); ++r) {
        for (int c = 0; c < cfg.window_cols(); ++c) {
            const cplx y = rx.values.wrapped(cfg.window_k_begin() + r, cfg.l_p + c);
            report.estimate(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
                std::abs(y) >= threshold ? y / xp : cplx{};
        }
    }
    return report;
}

double empirical_mse(const EffectiveChannel& true_heff, const EstimationReport& report,
                     const PilotConfig& cfg) {
    if (report.estimate.rows() != static_cast<std::size_t>(cfg.window_rows()) ||
        report.estimate.cols() != static_cast<std::size_t>(cfg.window_cols())) {
        throw std::invalid_argument("estimate does not match the pilot window");
    }
    double sum = 0.0;
    const int lag0 = -(cfg.k_max + cfg.k_hat);
    for (int r = 0; r < cfg.window_rows(); ++r) {
        for (int c = 0; c < cfg.window_cols(); ++c) {
            const cplx truth = true_heff.at(lag0 + r, c);
            sum += std::norm(truth - report.estimate(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
        }
    }
    return sum;
}

namespace {

void require_window_row(const PilotConfig& cfg, long long k) {
    if (k < cfg.window_k_begin() || k >= cfg.window_k_begin() + cfg.window_rows()) {
        throw std::invalid_argument("Doppler index outside the estimation window");
    }
}

}  // namespace

cplx interference_exact(const DDGrid& x, const EffectiveChannel& heff, const PilotConfig& cfg,
                        long long k, long long l) {
    require_window_row(cfg, k);
    if (l < cfg.l_p || l > cfg.l_p + cfg.l_max) {
        throw std::invalid_argument("delay index outside the estimation window");
    }
    const std::size_t N = x.dims.n_doppler;
    cplx acc{};
    for (std::size_t kk = 0; kk < N; ++kk) {
        const auto kp = static_cast<long long>(kk);
        if (cfg.in_doppler_guard(kp, N)) continue;
        for (long long lag = 0; lag <= cfg.l_max; ++lag) {
            acc += x.values.wrapped(kp, l - lag) * heff.at(k - kp, lag);
        }
    }
    return acc;
}

double interference_power_exact(const DDChannel& ch, const SeparableWindow& tx,
                                const SeparableWindow& rx, const PilotConfig& cfg, long long k) {
    if (!tx.delay_is_rectangular() || !rx.delay_is_rectangular()) {
        throw std::invalid_argument("interference power formula needs rectangular delay windows");
    }
    require_window_row(cfg, k);
    const std::size_t N = ch.dims.n_doppler;
    const auto Nl = static_cast<long long>(N);
    const double f0 = std::norm(delay_filter_response(tx, rx, 0.0));
    double total = 0.0;
    for (std::size_t kk = 0; kk < N; ++kk) {
        const auto kp = static_cast<long long>(kk);
        if (cfg.in_doppler_guard(kp, N)) continue;
        long long lag = (k - kp) % Nl;
        if (lag < 0) lag += Nl;
        for (const auto& p : ch.paths) {
            const cplx g = doppler_filter_response(tx, rx, static_cast<double>(lag) - p.doppler());
            total += p.mean_power * std::norm(g) * f0;
        }
    }
    return total;
}

double interference_power_approx(const PilotConfig& cfg, const GridDims& dims, double sidelobe_level) {
    if (!(sidelobe_level > 0.0 && sidelobe_level <= 1.0)) {
        throw std::invalid_argument("sidelobe level must be in (0, 1]");
    }
    const int outside = static_cast<int>(dims.n_doppler) - cfg.doppler_guard_size();
    if (outside < 0) throw std::invalid_argument("Doppler guard exceeds N");
    return outside * sidelobe_level * sidelobe_level;
}

double mse_floor(const PilotConfig& cfg, const GridDims& dims, double sidelobe_level) {
    if (!(cfg.pilot_power > 0.0)) throw std::invalid_argument("pilot power must be positive");
    return interference_power_approx(cfg, dims, sidelobe_level) * cfg.window_rows() *
           cfg.window_cols() / cfg.pilot_power;
}

KhatTrend khat_mse_trend(const GridDims& dims, int k_max, int l_max, double pilot_power,
                         double sidelobe_level) {
    KhatTrend trend;
    trend.regime_boundary = (static_cast<double>(dims.n_doppler) - 8.0 * k_max - 3.0) / 4.0;
    const int limit = PilotConfig::max_k_hat(dims.n_doppler, k_max);
    for (int kh = 0; kh <= limit; ++kh) {
        PilotConfig cfg;
        cfg.k_max = k_max;
        cfg.l_max = l_max;
        cfg.k_hat = kh;
        cfg.pilot_power = pilot_power;
        trend.rows.push_back({kh, mse_floor(cfg, dims, sidelobe_level), cfg.overhead_symbols()});
    }
    trend.monotone_decreasing = true;
    for (std::size_t i = 1; i < trend.rows.size(); ++i) {
        if (!(trend.rows[i].floor < trend.rows[i - 1].floor)) trend.monotone_decreasing = false;
    }
    return trend;
}

}  // namespace otfs
