#include <cmath>
#include <set>

#include "doctest.h"
#include "otfs/channel.hpp"
#include "otfs/link.hpp"
#include "otfs/transform.hpp"
#include "test_util.hpp"

using namespace otfs;
using otfs::testing::dims;

namespace {

DDChannel single_path(const GridDims& d, cplx gain, int delay, int doppler, double frac) {
    DDChannel ch;
    ch.dims = d;
    ch.paths.push_back({gain, delay, doppler, frac, std::norm(gain)});
    return ch;
}

std::size_t count_nonzero(const CMatrix& m, double tol = 1e-12) {
    std::size_t n = 0;
    for (const auto& v : m.flat()) n += std::abs(v) > tol;
    return n;
}

}  // namespace

TEST_CASE("gen_channel honours the configured ranges") {
    const auto d = dims(20, 30);
    ChannelGenConfig cfg;  // P = 5, k_max = 3, l_max = 4, decay 0.1
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const DDChannel ch = gen_channel(cfg, d, rng);
        REQUIRE(ch.paths.size() == 5);
        std::set<std::pair<int, int>> cells;
        double q_sum = 0.0;
        for (const auto& p : ch.paths) {
            CHECK(p.delay_idx >= 0);
            CHECK(p.delay_idx <= 4);
            CHECK(p.doppler_idx >= -3);
            CHECK(p.doppler_idx <= 3);
            CHECK(std::abs(p.doppler_frac) < 0.5);
            cells.emplace(p.delay_idx, p.doppler_idx);
            q_sum += p.mean_power;
        }
        CHECK(cells.size() == 5);
        CHECK(q_sum == doctest::Approx(1.0).epsilon(1e-12));
        ch.validate();
    }
}

TEST_CASE("exponential power delay profile") {
    const auto q = exponential_profile({0, 1, 2, 3, 4}, 0.1);
    const double expected[] = {0.24185514, 0.21883958, 0.19801424, 0.17917069, 0.16212035};
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(q[i] == doctest::Approx(expected[i]).epsilon(1e-7));
        sum += q[i];
    }
    CHECK(sum == doctest::Approx(1.0));

    const auto flat = exponential_profile({0, 4, 4, 1}, 0.0);
    for (double v : flat) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("gen_channel gain statistics follow the profile") {
    const auto d = dims(20, 30);
    ChannelGenConfig cfg;
    cfg.num_paths = 1;
    cfg.k_max = 0;
    cfg.l_max = 0;
    Rng rng(5);
    double power = 0.0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) power += std::norm(gen_channel(cfg, d, rng).paths[0].gain);
    // Single path carries the whole normalized profile: E|h|^2 = 1, stderr 1/sqrt(trials).
    CHECK(std::abs(power / trials - 1.0) < 4.0 / std::sqrt(trials));
}

TEST_CASE("gen_channel rejects impossible configurations") {
    const auto d = dims(20, 30);
    Rng rng(1);
    ChannelGenConfig too_many;
    too_many.num_paths = 36;  // 7 x 5 = 35 cells
    CHECK_THROWS_AS(gen_channel(too_many, d, rng), std::invalid_argument);
    ChannelGenConfig wide;
    wide.k_max = 10;
    CHECK_THROWS_AS(gen_channel(wide, d, rng), std::invalid_argument);
    ChannelGenConfig deep;
    deep.l_max = 30;
    CHECK_THROWS_AS(gen_channel(deep, d, rng), std::invalid_argument);
}

TEST_CASE("effective channel of a single integer-Doppler path") {
    const auto d = dims(20, 30);
    const auto rect = rectangular_window(d);
    const auto heff = effective_channel(single_path(d, 1.0, 3, 2, 0.0), rect, rect);
    CHECK(count_nonzero(heff.values) == 1);
    const cplx want = std::polar(1.0, -2.0 * kPi * 6.0 / 600.0);
    CHECK(std::abs(heff.values(2, 3) - want) < 1e-12);
}

TEST_CASE("fractional Doppler spreads over the whole delay column") {
    const auto d = dims(20, 30);
    const auto rect = rectangular_window(d);
    const auto heff = effective_channel(single_path(d, 1.0, 3, 2, 0.35), rect, rect);
    const cplx phase = std::polar(1.0, -2.0 * kPi * 2.35 * 3.0 / 600.0);
    for (std::size_t k = 0; k < 20; ++k) {
        CHECK(std::abs(heff.values(k, 3)) > 1e-6);
        CHECK(std::abs(heff.values(k, 3) - phase * rect_doppler_response(20, k - 2.35)) < 1e-12);
        for (std::size_t l = 0; l < 30; ++l) {
            if (l != 3) CHECK(std::abs(heff.values(k, l)) < 1e-12);
        }
    }
    CHECK(count_nonzero(heff.values) == 20);
}

TEST_CASE("negative Doppler lands modulo N") {
    const auto d = dims(20, 30);
    const auto rect = rectangular_window(d);
    const auto heff = effective_channel(single_path(d, 1.0, 1, -3, 0.0), rect, rect);
    CHECK(std::abs(heff.values(17, 1)) == doctest::Approx(1.0));
    CHECK(heff.at(-3, 1) == heff.values(17, 1));
}

TEST_CASE("effective channel invariants on random channels") {
    const auto d = dims(20, 30);
    const auto rect = rectangular_window(d);
    const auto dc = dc_window(d, -40.0);
    ChannelGenConfig cfg;
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const DDChannel ch = gen_channel(cfg, d, rng);

        // TX and RX placement of the same window give the same kernel.
        CHECK(max_abs_diff(effective_channel(ch, dc, rect).values, effective_channel(ch, rect, dc).values) < 1e-12);

        // Linearity over paths.
        CMatrix sum(20, 30);
        for (const auto& p : ch.paths) {
            DDChannel one{d, {p}};
            sum += effective_channel(one, dc, rect).values;
        }
        CHECK(max_abs_diff(sum, effective_channel(ch, dc, rect).values) < 1e-12);

        // Integer Doppler with rectangular windows keeps the channel sparse.
        DDChannel integer = ch;
        for (auto& p : integer.paths) p.doppler_frac = 0.0;
        const auto heff = effective_channel(integer, rect, rect);
        CHECK(count_nonzero(heff.values) == ch.paths.size());
        for (const auto& p : integer.paths) {
            const cplx want = p.gain * std::polar(1.0, -2.0 * kPi * p.doppler_idx * p.delay_idx / 600.0);
            CHECK(std::abs(heff.at(p.doppler_idx, p.delay_idx) - want) < 1e-12);
        }
    }
}

TEST_CASE("single-path energy and phase rotation with rectangular windows") {
    const auto d = dims(20, 30);
    const auto rect = rectangular_window(d);
    const cplx gain{0.6, -0.8};
    for (double frac : {-0.49, -0.2, 0.0, 0.35}) {
        const auto heff = effective_channel(single_path(d, gain, 4, 1, frac), rect, rect);
        double expected = 0.0;
        for (int k = 0; k < 20; ++k) expected += std::norm(rect_doppler_response(20, k - 1 - frac));
        CHECK(heff.values.energy() == doctest::Approx(std::norm(gain) * expected).epsilon(1e-12));

        // Delay only rotates the phase: compare delay 4 against delay 0.
        const auto base = effective_channel(single_path(d, gain, 0, 1, frac), rect, rect);
        const cplx rot = std::polar(1.0, -2.0 * kPi * (1 + frac) * 4 / 600.0);
        for (std::size_t k = 0; k < 20; ++k) {
            CHECK(std::abs(heff.values(k, 4) - rot * base.values(k, 0)) < 1e-12);
        }
    }
}

TEST_CASE("TF effective channel") {
    const auto d = dims(20, 30);
    SUBCASE("zero delay and Doppler") {
        const TFGrid h = tf_effective_channel(single_path(d, 1.0, 0, 0, 0.0), d);
        for (const auto& v : h.values.flat()) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-14);
    }
    SUBCASE("unit Doppler is a pure time modulation") {
        const TFGrid h = tf_effective_channel(single_path(d, 1.0, 0, 1, 0.0), d);
        for (std::size_t n = 0; n < 20; ++n) {
            for (std::size_t m = 0; m < 30; ++m) {
                CHECK(std::abs(h(n, m) - std::polar(1.0, 2.0 * kPi * n / 20.0)) < 1e-13);
            }
        }
    }
    SUBCASE("TF pipeline on an impulse reproduces the DD kernel") {
        const auto dc = dc_window(d, -40.0);
        const auto rect = rectangular_window(d);
        Rng rng(2);
        const DDChannel ch = gen_channel(ChannelGenConfig{}, d, rng);
        DDGrid pilot(d);
        pilot(0, 0) = 1.0;
        TFGrid tf = apply_tf_window(isfft(pilot), dc);
        const TFGrid h = tf_effective_channel(ch, d);
        for (std::size_t n = 0; n < 20; ++n) {
            for (std::size_t m = 0; m < 30; ++m) tf(n, m) *= h(n, m);
        }
        const DDGrid y = sfft(apply_tf_window(tf, rect));
        CHECK(max_abs_diff(y.values, effective_channel(ch, dc, rect).values) < 1e-9);
    }
}

TEST_CASE("channel CSV dump") {
    const auto d = dims(20, 30);
    const std::string csv = channel_csv(single_path(d, {0.5, -0.25}, 2, -1, 0.125));
    CHECK(csv == "path_idx,gain_re,gain_im,delay_idx,doppler_idx,doppler_frac\n0,0.5,-0.25,2,-1,0.125\n");
}

TEST_CASE("DDChannel validation") {
    const auto d = dims(20, 30);
    CHECK_THROWS_AS(single_path(d, 1.0, 0, 0, 0.5).validate(), std::invalid_argument);
    DDChannel dup = single_path(d, 1.0, 1, 1, 0.1);
    dup.paths.push_back(dup.paths[0]);
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
}
