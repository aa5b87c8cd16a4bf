#include "otfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <utility>

namespace otfs {

void DDChannel::validate() const {
    dims.validate();
    std::set<std::pair<int, int>> cells;
    for (const auto& p : paths) {
        if (!(std::abs(p.doppler_frac) < 0.5)) {
            throw std::invalid_argument("fractional Doppler must lie strictly inside (-0.5, 0.5)");
        }
        if (p.delay_idx < 0 || static_cast<std::size_t>(p.delay_idx) >= dims.m_delay) {
            throw std::invalid_argument("path delay outside the grid");
        }
        if (!cells.emplace(p.delay_idx, p.doppler_idx).second) {
            throw std::invalid_argument("paths must occupy distinct (delay, Doppler) cells");
        }
    }
}

void ChannelGenConfig::validate(const GridDims& dims) const {
    dims.validate();
    if (num_paths < 1) throw std::invalid_argument("need at least one path");
    if (k_max < 0 || l_max < 0) throw std::invalid_argument("k_max and l_max must be non-negative");
    if (!(pdp_decay >= 0.0)) throw std::invalid_argument("PDP decay must be non-negative");
    if (static_cast<std::size_t>(2 * k_max + 1) > dims.n_doppler) {
        throw std::invalid_argument("2 k_max + 1 exceeds N");
    }
    if (static_cast<std::size_t>(l_max + 1) > dims.m_delay) {
        throw std::invalid_argument("l_max + 1 exceeds M");
    }
    if (num_paths > (2 * k_max + 1) * (l_max + 1)) {
        throw std::invalid_argument("more paths than distinct (delay, Doppler) cells");
    }
}

std::vector<double> exponential_profile(const std::vector<int>& delays, double decay) {
    std::vector<double> q(delays.size());
    double total = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        q[i] = std::exp(-decay * delays[i]);
        total += q[i];
    }
    for (auto& v : q) v /= total;
    return q;
}

DDChannel gen_channel(const ChannelGenConfig& cfg, const GridDims& dims, Rng& rng) {
    cfg.validate(dims);
    const int doppler_span = 2 * cfg.k_max + 1;
    const int cells = doppler_span * (cfg.l_max + 1);

    // Partial Fisher-Yates over the cell lattice gives P distinct cells.
    std::vector<int> lattice(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) lattice[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < cfg.num_paths; ++i) {
        std::uniform_int_distribution<int> pick(i, cells - 1);
        std::swap(lattice[static_cast<std::size_t>(i)], lattice[static_cast<std::size_t>(pick(rng))]);
    }

    DDChannel ch;
    ch.dims = dims;
    std::vector<int> delays;
    for (int i = 0; i < cfg.num_paths; ++i) {
        const int cell = lattice[static_cast<std::size_t>(i)];
        ChannelPath p;
        p.delay_idx = cell / doppler_span;
        p.doppler_idx = cell % doppler_span - cfg.k_max;
        ch.paths.push_back(p);
        delays.push_back(p.delay_idx);
    }

    std::uniform_real_distribution<double> frac(-0.5, 0.5);
    for (auto& p : ch.paths) {
        double f;
        do {
            f = frac(rng);
        } while (f == -0.5);
        p.doppler_frac = f;
    }

    const auto q = exponential_profile(delays, cfg.pdp_decay);
    for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        ch.paths[i].mean_power = q[i];
        ch.paths[i].gain = complex_gaussian(rng, q[i]);
    }
    return ch;
}

namespace {

cplx path_phase(const ChannelPath& p, const GridDims& dims) {
    return std::polar(1.0, -2.0 * kPi * p.doppler() * p.delay_idx /
                               static_cast<double>(dims.n_doppler * dims.m_delay));
}

}  // namespace

EffectiveChannel effective_channel(const DDChannel& ch, const SeparableWindow& tx,
                                   const SeparableWindow& rx) {
    if (!tx.matches(ch.dims) || !rx.matches(ch.dims)) {
        throw std::invalid_argument("window dims do not match channel dims");
    }
    const std::size_t N = ch.dims.n_doppler;
    const std::size_t M = ch.dims.m_delay;
    EffectiveChannel out{ch.dims, CMatrix(N, M)};

    std::vector<cplx> g(N), f(M);
    for (const auto& p : ch.paths) {
        for (std::size_t k = 0; k < N; ++k) {
            g[k] = doppler_filter_response(tx, rx, static_cast<double>(k) - p.doppler());
        }
        for (std::size_t l = 0; l < M; ++l) {
            f[l] = delay_filter_response(tx, rx, static_cast<double>(l) - p.delay_idx);
        }
        const cplx coef = p.gain * path_phase(p, ch.dims);
        for (std::size_t k = 0; k < N; ++k) {
            for (std::size_t l = 0; l < M; ++l) out.values(k, l) += coef * g[k] * f[l];
        }
    }
    return out;
}

TFGrid tf_effective_channel(const DDChannel& ch, const GridDims& dims) {
    TFGrid out(dims);
    const auto N = static_cast<double>(dims.n_doppler);
    const auto M = static_cast<double>(dims.m_delay);
    for (const auto& p : ch.paths) {
        const cplx coef = p.gain * path_phase(p, dims);
        for (std::size_t n = 0; n < dims.n_doppler; ++n) {
            for (std::size_t m = 0; m < dims.m_delay; ++m) {
                const double angle = 2.0 * kPi *
                    (static_cast<double>(n) * p.doppler() / N - static_cast<double>(m) * p.delay_idx / M);
                out(n, m) += coef * std::polar(1.0, angle);
            }
        }
    }
    return out;
}

std::string channel_csv(const DDChannel& ch) {
    std::string out = "path_idx,gain_re,gain_im,delay_idx,doppler_idx,doppler_frac\n";
    char line[200];
    for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        const auto& p = ch.paths[i];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%d,%d,%.17g\n", i, p.gain.real(),
                      p.gain.imag(), p.delay_idx, p.doppler_idx, p.doppler_frac);
        out += line;
    }
    return out;
}

}  // namespace otfs
