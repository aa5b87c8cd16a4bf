#include <cmath>

#include "doctest.h"
#include "otfs/chanest.hpp"
#include "otfs/link.hpp"
#include "test_util.hpp"

using namespace otfs;
using otfs::testing::dims;

namespace {

PilotConfig ref_pilot(int k_hat, double power = 1000.0) {
    return PilotConfig::centred(dims(20, 30), 3, 4, k_hat, power);
}

}  // namespace

TEST_CASE("pilot configuration") {
    const auto d = dims(20, 30);
    const auto p = ref_pilot(0);
    CHECK(p.k_p == 10);
    CHECK(p.l_p == 15);
    CHECK(PilotConfig::max_k_hat(20, 3) == 1);
    CHECK(p.overhead_symbols() == 9 * 13);
    CHECK(ref_pilot(1).overhead_symbols() == 9 * 17);
    CHECK(p.pilot_amplitude() == doctest::Approx(std::sqrt(1000.0)));
    CHECK(dbw_to_linear(30.0) == doctest::Approx(1000.0));
    CHECK(dbw_to_linear(10.0) == doctest::Approx(10.0));

    PilotConfig bad = ref_pilot(2);
    CHECK_THROWS_AS(bad.validate(d), std::invalid_argument);
    bad = ref_pilot(0);
    bad.l_p = 2;
    CHECK_THROWS_AS(bad.validate(d), std::invalid_argument);
    bad.l_p = 26;
    CHECK_THROWS_AS(bad.validate(d), std::invalid_argument);
    bad = ref_pilot(0);
    bad.pilot_power = 0.0;
    CHECK_THROWS_AS(bad.validate(d), std::invalid_argument);
    CHECK_THROWS_AS(PilotConfig::centred(dims(12, 30), 3, 4, 0, 1.0).validate(dims(12, 30)), std::invalid_argument);
}

TEST_CASE("embed_pilot guard geometry") {
    const auto d = dims(20, 30);
    Rng rng(3);
    const DDGrid data = qpsk_grid(d, rng);

    for (int k_hat : {0, 1}) {
        const auto cfg = ref_pilot(k_hat, 1000.0);
        const DDGrid x = embed_pilot(data, cfg);
        int zero_rows = 0;
        for (std::size_t k = 0; k < 20; ++k) {
            bool all_zero = true;
            for (std::size_t l = 11; l <= 19; ++l) {
                if (k == 10 && l == 15) continue;
                all_zero = all_zero && x(k, l) == cplx{};
            }
            zero_rows += all_zero;
            // Outside the delay guard nothing changes.
            CHECK(x(k, 0) == data(k, 0));
            CHECK(x(k, 29) == data(k, 29));
        }
        CHECK(zero_rows == 4 * 3 + 4 * k_hat + 1);
        CHECK(20 - zero_rows == (k_hat == 0 ? 7 : 3));
        CHECK(x(10, 15) == cplx{std::sqrt(1000.0), 0.0});
    }
}

TEST_CASE("guard set wraps modulo N") {
    auto cfg = ref_pilot(0);
    cfg.k_p = 2;
    // Guard spans 2 - 6 ... 2 + 6, i.e. rows 16..19 and 0..8.
    CHECK(cfg.in_doppler_guard(16, 20));
    CHECK(cfg.in_doppler_guard(8, 20));
    CHECK_FALSE(cfg.in_doppler_guard(9, 20));
    CHECK_FALSE(cfg.in_doppler_guard(15, 20));
}

TEST_CASE("QAM symbols have unit average power") {
    const auto d = dims(20, 30);
    Rng rng(12);
    for (int order : {4, 16, 64}) {
        double p = 0.0;
        for (int f = 0; f < 50; ++f) p += qam_grid(d, order, rng).values.energy();
        CHECK(p / (50 * 600.0) == doctest::Approx(1.0).epsilon(0.03));
    }
    for (const auto& v : qpsk_grid(d, rng).values.flat()) CHECK(std::norm(v) == doctest::Approx(1.0));
    CHECK_THROWS_AS(qam_grid(d, 8, rng), std::invalid_argument);
}

TEST_CASE("threshold estimator") {
    const auto d = dims(20, 30);
    auto cfg = ref_pilot(0, 1.0);
    DDGrid rx(d);
    rx(10, 15) = 0.02;
    rx(11, 16) = 0.05;
    const auto report = estimate(rx, cfg, 1e-4);
    CHECK(report.estimate.rows() == 7);
    CHECK(report.estimate.cols() == 5);
    CHECK(report.estimate(3, 0) == cplx{});          // |y| = 0.02 < 0.03
    CHECK(report.estimate(4, 1) == cplx{0.05, 0.0});  // above threshold
    CHECK(report.overhead_symbols == 117);

    const auto open = estimate(rx, cfg, 0.0);
    CHECK(open.estimate(3, 0) == cplx{0.02, 0.0});
    CHECK_THROWS_AS(estimate(rx, cfg, -1.0), std::invalid_argument);
}

TEST_CASE("empirical MSE definition") {
    const auto d = dims(20, 30);
    const auto cfg = ref_pilot(0, 1.0);
    DDChannel ch{d, {{1.0, 2, 1, 0.0, 1.0}}};
    const auto rect = rectangular_window(d);
    const auto heff = effective_channel(ch, rect, rect);

    EstimationReport perfect;
    perfect.estimate = CMatrix(7, 5);
    for (int r = 0; r < 7; ++r) {
        for (int c = 0; c < 5; ++c) perfect.estimate(r, c) = heff.at(r - 3, c);
    }
    CHECK(empirical_mse(heff, perfect, cfg) == 0.0);

    EstimationReport blank;
    blank.estimate = CMatrix(7, 5);
    CHECK(empirical_mse(heff, blank, cfg) == doctest::Approx(1.0));
    blank.empirical_mse = 3.5;
    CHECK(blank.per_cell_mse() == doctest::Approx(0.1));
}

TEST_CASE("full guard without noise recovers the effective channel") {
    const auto d = dims(20, 30);
    // k_max = 1, k_hat = 3: 4 + 12 + 1 = 17; use N = 17 to reach the full guard.
    const auto d17 = dims(17, 30);
    auto cfg = PilotConfig::centred(d17, 1, 4, 3, 10.0);
    cfg.validate(d17);
    CHECK(cfg.full_guard(17));
    CHECK(cfg.overhead_symbols() == 9 * 17);
    (void)d;

    Rng rng(6);
    ChannelGenConfig gen;
    gen.k_max = 1;
    const auto rect = rectangular_window(d17);
    for (int trial = 0; trial < 10; ++trial) {
        DDChannel ch = gen_channel(gen, d17, rng);
        const DDGrid x = embed_pilot(qpsk_grid(d17, rng), cfg);
        const auto heff = effective_channel(ch, rect, rect);
        const RxFrame rx = simulate_frame_dd(x, heff, FrameConfig{d17, rect, rect, 0.0}, rng);
        const auto report = estimate(rx.dd_received, cfg, 0.0);
        CHECK(empirical_mse(heff, report, cfg) < 1e-18);
    }
}

TEST_CASE("integer Doppler with rectangular windows has no interference") {
    const auto d = dims(20, 30);
    const auto cfg = ref_pilot(0);
    Rng rng(8);
    const auto rect = rectangular_window(d);
    DDChannel ch = gen_channel(ChannelGenConfig{}, d, rng);
    for (auto& p : ch.paths) p.doppler_frac = 0.0;
    const auto heff = effective_channel(ch, rect, rect);
    const DDGrid x = embed_pilot(qpsk_grid(d, rng), cfg);
    for (long long k = 7; k <= 13; ++k) {
        for (long long l = 15; l <= 19; ++l) CHECK(std::abs(interference_exact(x, heff, cfg, k, l)) < 1e-12);
    }
    CHECK_THROWS_AS(interference_exact(x, heff, cfg, 6, 15), std::invalid_argument);
    CHECK_THROWS_AS(interference_exact(x, heff, cfg, 10, 20), std::invalid_argument);
}

TEST_CASE("received window cells decompose into pilot, interference and noise") {
    const auto d = dims(20, 30);
    Rng rng(21);
    const auto dc = dc_window(d, -40.0);
    const auto rect = rectangular_window(d);
    for (int k_hat : {0, 1}) {
        const auto cfg = ref_pilot(k_hat, 10.0);
        const DDChannel ch = gen_channel(ChannelGenConfig{}, d, rng);
        const auto heff = effective_channel(ch, rect, dc);
        const DDGrid x = embed_pilot(qpsk_grid(d, rng), cfg);
        const RxFrame rx = simulate_frame_dd(x, heff, FrameConfig{d, rect, dc, 1e-3}, rng);
        const double xp = cfg.pilot_amplitude();
        for (long long k = cfg.window_k_begin(); k < cfg.window_k_begin() + cfg.window_rows(); ++k) {
            for (long long l = cfg.l_p; l <= cfg.l_p + cfg.l_max; ++l) {
                const cplx lhs = rx.dd_received.values.wrapped(k, l) - xp * heff.at(k - cfg.k_p, l - cfg.l_p) -
                                 rx.noise_part.values.wrapped(k, l);
                CHECK(std::abs(lhs - interference_exact(x, heff, cfg, k, l)) < 1e-9);
            }
        }
    }
}

TEST_CASE("interference power: exact formula against data Monte Carlo") {
    const auto d = dims(20, 30);
    const auto cfg = ref_pilot(0);
    const auto rect = rectangular_window(d);
    // One path per delay so that no two paths share a delay lag; with the
    // realized |h_i|^2 as path power the formula is exact for this channel.
    Rng rng(55);
    DDChannel ch{d, {}};
    std::uniform_real_distribution<double> frac(-0.49, 0.49);
    std::uniform_int_distribution<int> dop(-3, 3);
    for (int l = 0; l <= 4; ++l) {
        const cplx g = complex_gaussian(rng, 0.2);
        ch.paths.push_back({g, l, dop(rng), frac(rng), std::norm(g)});
    }
    const auto heff = effective_channel(ch, rect, rect);
    const long long k = 12, l = 17;
    const double exact = interference_power_exact(ch, rect, rect, cfg, k);

    const int draws = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const DDGrid x = embed_pilot(qpsk_grid(d, rng), cfg);
        const double p = std::norm(interference_exact(x, heff, cfg, k, l));
        sum += p;
        sum2 += p * p;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    CHECK(std::abs(mean - exact) <= 3.0 * se);

    SUBCASE("full guard gives zero") {
        const auto d17 = dims(17, 30);
        const auto full = PilotConfig::centred(d17, 1, 4, 3, 1.0);
        DDChannel c17{d17, {{1.0, 0, 1, 0.3, 1.0}}};
        const auto r17 = rectangular_window(d17);
        CHECK(interference_power_exact(c17, r17, r17, full, 8) == 0.0);
    }
    SUBCASE("non-rectangular delay window is rejected") {
        auto odd = rect;
        odd.delay[0] = 0.5;
        CHECK_THROWS_AS(interference_power_exact(ch, odd, rect, cfg, k), std::invalid_argument);
    }
}

TEST_CASE("sidelobe plateau of the rectangular window") {
    // Deep sidelobe terms are close to (1/N)^2 for N = 20.
    for (double off : {9.5, 10.5, -9.5}) {
        CHECK(std::norm(rect_doppler_response(20, off)) == doctest::Approx(0.0025).epsilon(0.01));
    }
}

TEST_CASE("interference approximation and error floor") {
    const auto d = dims(20, 30);
    CHECK(interference_power_approx(ref_pilot(0), d, 1.0 / 20) == doctest::Approx(0.0175));
    CHECK(interference_power_approx(ref_pilot(1), d, 0.01) == doctest::Approx(3e-4));
    const auto d17 = dims(17, 30);
    CHECK(interference_power_approx(PilotConfig::centred(d17, 1, 4, 3, 1.0), d17, 0.05) == 0.0);
    CHECK_THROWS_AS(interference_power_approx(ref_pilot(0), d, 0.0), std::invalid_argument);

    CHECK(mse_floor(ref_pilot(0, 1.0), d, 1.0 / 20) == doctest::Approx(0.6125));
    CHECK(mse_floor(ref_pilot(1, 1.0), d, 1.0 / 20) == doctest::Approx(0.3375));
    CHECK(mse_floor(ref_pilot(0, 1.0), d, 0.01) == doctest::Approx(0.0245));
    CHECK(mse_floor(ref_pilot(1, 1.0), d, 0.01) == doctest::Approx(0.0135));
    CHECK(mse_floor(ref_pilot(1, 1000.0), d, 0.01) == doctest::Approx(1.35e-5));
    // Exact 1/|x_p|^2 scaling.
    CHECK(mse_floor(ref_pilot(0, 10.0), d, 0.05) / mse_floor(ref_pilot(0, 1000.0), d, 0.05) ==
          doctest::Approx(100.0));
    // DC at -40 dB is about 14 dB below the rectangular plateau.
    CHECK(10 * std::log10(mse_floor(ref_pilot(0, 1.0), d, 1.0 / 20) / mse_floor(ref_pilot(0, 1.0), d, 0.01)) ==
          doctest::Approx(13.979).epsilon(1e-3));
}

TEST_CASE("k_hat trend") {
    SUBCASE("N = 20 decreases monotonically") {
        const auto t = khat_mse_trend(dims(20, 30), 3, 4, 1.0, 0.05);
        CHECK(t.regime_boundary == doctest::Approx(-1.75));
        CHECK(t.monotone_decreasing);
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0].floor == doctest::Approx(0.6125));
        CHECK(t.rows[1].floor == doctest::Approx(0.3375));
    }
    SUBCASE("N = 40 rises then falls") {
        const auto t = khat_mse_trend(dims(40, 30), 3, 4, 1.0, 1.0);
        CHECK(t.regime_boundary == doctest::Approx(3.25));
        CHECK_FALSE(t.monotone_decreasing);
        const double expected[] = {945, 1035, 1045, 975, 825, 595, 285};
        REQUIRE(t.rows.size() == 7);
        for (std::size_t i = 0; i < 7; ++i) CHECK(t.rows[i].floor == doctest::Approx(expected[i]));
    }
    SUBCASE("full guard floor vanishes") {
        const auto t = khat_mse_trend(dims(17, 30), 1, 4, 1.0, 0.05);
        CHECK(t.rows.back().k_hat == 3);
        CHECK(t.rows.back().floor == 0.0);
    }
}
