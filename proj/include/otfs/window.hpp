#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otfs/grid.hpp"

namespace otfs {

enum class WindowKind { Rectangular, Sine, DolphChebyshev, Custom };

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

struct DCWindowSpec {
    double sidelobe_level_db = -40.0;
    /// Optional mainlobe width target in Doppler bins; informational only.
    std::optional<double> mainlobe_width_bins;

    void validate() const;
};

/**
 * Separable TF window, W[n,m] = doppler[n] * delay[m].
 *
 * All built-in constructors normalize the Doppler axis to unit DC gain,
 * (1/N) sum_n doppler[n] = 1, so that the Doppler response at zero offset
 * equals one for every window kind. The delay axis is always all-ones.
 */
struct SeparableWindow {
    std::vector<cplx> doppler;
    std::vector<cplx> delay;
    WindowKind kind = WindowKind::Custom;
    std::optional<DCWindowSpec> dc_spec;

    std::size_t n_doppler() const { return doppler.size(); }
    std::size_t m_delay() const { return delay.size(); }
    cplx at(std::size_t n, std::size_t m) const { return doppler[n] * delay[m]; }

    bool matches(const GridDims& dims) const {
        return doppler.size() == dims.n_doppler && delay.size() == dims.m_delay;
    }
    bool delay_is_rectangular() const;
    void validate() const;
};

SeparableWindow rectangular_window(const GridDims& dims);

/// sin(pi n / (N-1)) on the Doppler axis, rescaled to unit DC gain. Needs N >= 2.
SeparableWindow sine_window(const GridDims& dims);

/// Raw (unnormalized) Sine taper as written, sin(pi n / (N-1)).
std::vector<double> sine_taper(std::size_t n);

/// Dolph-Chebyshev Doppler taper with equiripple sidelobes at sidelobe_level_db
/// (negative, relative to the mainlobe peak). Symmetric, unit DC gain.
SeparableWindow dc_window(const GridDims& dims, double sidelobe_level_db);

/// Raw symmetric Chebyshev taper normalized to a peak weight of one.
std::vector<double> chebyshev_taper(std::size_t n, double sidelobe_level_db);

SeparableWindow custom_window(std::vector<cplx> doppler, std::vector<cplx> delay);

/// Pointwise product of two windows (the window obtained by applying both).
SeparableWindow product_window(const SeparableWindow& a, const SeparableWindow& b);

/// G_N(nu) = (1/N) sum_n V[n] U[n] exp(-j 2 pi n nu / N).
cplx doppler_filter_response(const SeparableWindow& tx, const SeparableWindow& rx, double offset);

/// F_M(lambda) = (1/M) sum_m V[m] U[m] exp(+j 2 pi m lambda / M).
cplx delay_filter_response(const SeparableWindow& tx, const SeparableWindow& rx, double offset);

/// Closed-form Doppler response of the rectangular pair.
cplx rect_doppler_response(std::size_t n, double offset);

/// Closed-form delay response of the rectangular pair. The phase term carries a
/// positive sign to match the e^{+j...} kernel of the delay response.
cplx rect_delay_response(std::size_t m, double offset);

/// v_z[k,l], the DD-domain filter induced by the RX window alone.
cplx noise_filter_vz(const SeparableWindow& rx, long long k, long long l);

/// All N x M noise filter lags, v_z[k,l] for k in [0,N), l in [0,M).
CMatrix noise_filter_matrix(const SeparableWindow& rx);

/// Brick-wall Doppler response; analysis reference only, not realizable.
double ideal_window_response(double offset);

enum class MainlobeAngle {
    /// theta = (k_main / 2) * (2 pi / N): half-width in bins mapped to radians.
    BinsToRadians,
    /// theta = k_main / 2 taken directly in radians.
    RawRadians,
};

/// Lowest sidelobe level (dB, negative) achievable by a Dolph-Chebyshev window
/// of length N whose Doppler mainlobe spans k_main.
double dc_sidelobe_for_mainlobe(double k_main, std::size_t n_doppler,
                                MainlobeAngle convention = MainlobeAngle::BinsToRadians);

struct SidelobeMeasurement {
    double peak_sidelobe = 0.0;     // linear, relative to |G(0)|
    double peak_sidelobe_db = 0.0;
    double mainlobe_low = 0.0;      // first local minimum below offset 0 (bins)
    double mainlobe_high = 0.0;     // first local minimum above offset 0 (bins)

    double mainlobe_width() const { return mainlobe_high - mainlobe_low; }
};

/// Scans |G_N| of the (tx, rx) pair on a lattice of the given step over one
/// period centred on zero. The mainlobe ends at the first local minimum on each
/// side of the origin; everything beyond is sidelobe.
SidelobeMeasurement measure_sidelobes(const SeparableWindow& tx, const SeparableWindow& rx,
                                      double step = 0.01);

/// Sidelobe level SL_w fed to the interference and error-floor formulas: 1/N
/// for the rectangular pair, the measured peak sidelobe otherwise.
double effective_sidelobe_level(const SeparableWindow& tx, const SeparableWindow& rx);

struct ResponseSample {
    double offset_bins;
    double magnitude;
    double magnitude_db;
    double phase_rad;
};

/// Samples G_N on [-N/2, N/2] with the given resolution.
std::vector<ResponseSample> sample_doppler_response(const SeparableWindow& tx,
                                                    const SeparableWindow& rx,
                                                    double resolution, double shift = 0.0);

/// Ideal response sampled on the same lattice.
std::vector<ResponseSample> sample_ideal_response(std::size_t n_doppler, double resolution,
                                                  double shift = 0.0);

/// CSV with header offset_bins,magnitude,magnitude_db,phase_rad.
std::string response_csv(const std::vector<ResponseSample>& samples);

}  // namespace otfs
