#include "otfs/window.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace otfs {

namespace {

void normalize_dc_gain(std::vector<cplx>& w) {
    cplx sum{};
    for (const auto& v : w) sum += v;
    const cplx mean = sum / static_cast<double>(w.size());
    if (std::abs(mean) == 0.0) throw std::invalid_argument("window has zero DC gain");
    for (auto& v : w) v /= mean;
}

std::vector<cplx> to_complex(const std::vector<double>& w) {
    return {w.begin(), w.end()};
}

void require_same_lengths(const SeparableWindow& tx, const SeparableWindow& rx) {
    if (tx.doppler.size() != rx.doppler.size() || tx.delay.size() != rx.delay.size()) {
        throw std::invalid_argument("TX and RX window lengths differ");
    }
}

double chebyshev_poly(std::size_t order, double x) {
    const auto n = static_cast<double>(order);
    if (x > 1.0) return std::cosh(n * std::acosh(x));
    if (x < -1.0) return (order % 2 == 0 ? 1.0 : -1.0) * std::cosh(n * std::acosh(-x));
    return std::cos(n * std::acos(x));
}

}  // namespace

std::string to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::Rectangular: return "rect";
        case WindowKind::Sine: return "sine";
        case WindowKind::DolphChebyshev: return "dc";
        case WindowKind::Custom: return "custom";
    }
    return "custom";
}

WindowKind window_kind_from_string(const std::string& name) {
    if (name == "rect" || name == "rectangular") return WindowKind::Rectangular;
    if (name == "sine") return WindowKind::Sine;
    if (name == "dc" || name == "dolph-chebyshev") return WindowKind::DolphChebyshev;
    throw std::invalid_argument("unknown window kind '" + name + "'");
}

void DCWindowSpec::validate() const {
    if (!(sidelobe_level_db < 0.0) || !std::isfinite(sidelobe_level_db)) {
        throw std::invalid_argument("DC sidelobe level must be negative dB");
    }
    if (mainlobe_width_bins && !(*mainlobe_width_bins > 1.0)) {
        throw std::invalid_argument("DC mainlobe width must exceed one bin");
    }
}

bool SeparableWindow::delay_is_rectangular() const {
    return std::all_of(delay.begin(), delay.end(), [](const cplx& v) { return v == cplx{1.0, 0.0}; });
}

void SeparableWindow::validate() const {
    if (doppler.empty() || delay.empty()) throw std::invalid_argument("empty window axis");
    auto finite = [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
    if (!std::all_of(doppler.begin(), doppler.end(), finite) ||
        !std::all_of(delay.begin(), delay.end(), finite)) {
        throw std::invalid_argument("window has non-finite weights");
    }
}

SeparableWindow rectangular_window(const GridDims& dims) {
    dims.validate();
    SeparableWindow w;
    w.doppler.assign(dims.n_doppler, cplx{1.0, 0.0});
    w.delay.assign(dims.m_delay, cplx{1.0, 0.0});
    w.kind = WindowKind::Rectangular;
    return w;
}

std::vector<double> sine_taper(std::size_t n) {
    if (n < 2) throw std::invalid_argument("Sine window needs N >= 2");
    std::vector<double> w(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::sin(kPi * static_cast<double>(i) / denom);
    return w;
}

SeparableWindow sine_window(const GridDims& dims) {
    dims.validate();
    SeparableWindow w;
    w.doppler = to_complex(sine_taper(dims.n_doppler));
    normalize_dc_gain(w.doppler);
    w.delay.assign(dims.m_delay, cplx{1.0, 0.0});
    w.kind = WindowKind::Sine;
    return w;
}

// Frequency-sampling construction: sample the Chebyshev polynomial
// T_{N-1}(x0 cos(pi k / N)) on the N-point DFT grid and transform back.
std::vector<double> chebyshev_taper(std::size_t n, double sidelobe_level_db) {
    if (n < 2) throw std::invalid_argument("Dolph-Chebyshev window needs N >= 2");
    DCWindowSpec{sidelobe_level_db, std::nullopt}.validate();

    const std::size_t order = n - 1;
    const double ratio = std::pow(10.0, -sidelobe_level_db / 20.0);
    const double x0 = std::cosh(std::acosh(ratio) / static_cast<double>(order));
    const auto nd = static_cast<double>(n);

    std::vector<cplx> p(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = x0 * std::cos(kPi * static_cast<double>(k) / nd);
        p[k] = chebyshev_poly(order, x);
        // Even lengths need a half-sample shift to land on a symmetric taper.
        if (n % 2 == 0) p[k] *= std::polar(1.0, kPi * static_cast<double>(k) / nd);
    }

    std::vector<double> spectrum(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) {
            acc += p[k] * std::polar(1.0, -2.0 * kPi * static_cast<double>((i * k) % n) / nd);
        }
        spectrum[i] = acc.real();
    }

    std::vector<double> w;
    w.reserve(n);
    if (n % 2 == 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = half - 1; i >= 1; --i) w.push_back(spectrum[i]);
        for (std::size_t i = 0; i < half; ++i) w.push_back(spectrum[i]);
    } else {
        const std::size_t half = n / 2 + 1;
        for (std::size_t i = half - 1; i >= 1; --i) w.push_back(spectrum[i]);
        for (std::size_t i = 1; i < half; ++i) w.push_back(spectrum[i]);
    }
    const double peak = *std::max_element(w.begin(), w.end());
    for (auto& v : w) v /= peak;
    // Enforce exact symmetry; the two halves differ only by rounding.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double avg = 0.5 * (w[i] + w[n - 1 - i]);
        w[i] = avg;
        w[n - 1 - i] = avg;
    }
    return w;
}

SeparableWindow dc_window(const GridDims& dims, double sidelobe_level_db) {
    dims.validate();
    SeparableWindow w;
    w.doppler = to_complex(chebyshev_taper(dims.n_doppler, sidelobe_level_db));
    normalize_dc_gain(w.doppler);
    w.delay.assign(dims.m_delay, cplx{1.0, 0.0});
    w.kind = WindowKind::DolphChebyshev;
    w.dc_spec = DCWindowSpec{sidelobe_level_db, std::nullopt};
    return w;
}

SeparableWindow custom_window(std::vector<cplx> doppler, std::vector<cplx> delay) {
    SeparableWindow w;
    w.doppler = std::move(doppler);
    w.delay = std::move(delay);
    w.kind = WindowKind::Custom;
    w.validate();
    return w;
}

SeparableWindow product_window(const SeparableWindow& a, const SeparableWindow& b) {
    require_same_lengths(a, b);
    SeparableWindow w;
    w.doppler.resize(a.doppler.size());
    w.delay.resize(a.delay.size());
    for (std::size_t i = 0; i < w.doppler.size(); ++i) w.doppler[i] = a.doppler[i] * b.doppler[i];
    for (std::size_t i = 0; i < w.delay.size(); ++i) w.delay[i] = a.delay[i] * b.delay[i];
    w.kind = WindowKind::Custom;
    return w;
}

cplx doppler_filter_response(const SeparableWindow& tx, const SeparableWindow& rx, double offset) {
    require_same_lengths(tx, rx);
    const std::size_t n = tx.doppler.size();
    const auto nd = static_cast<double>(n);
    cplx acc{};
    for (std::size_t i = 0; i < n; ++i) {
        acc += rx.doppler[i] * tx.doppler[i] *
               std::polar(1.0, -2.0 * kPi * static_cast<double>(i) * offset / nd);
    }
    return acc / nd;
}

cplx delay_filter_response(const SeparableWindow& tx, const SeparableWindow& rx, double offset) {
    require_same_lengths(tx, rx);
    const std::size_t m = tx.delay.size();
    const auto md = static_cast<double>(m);
    cplx acc{};
    for (std::size_t i = 0; i < m; ++i) {
        acc += rx.delay[i] * tx.delay[i] *
               std::polar(1.0, 2.0 * kPi * static_cast<double>(i) * offset / md);
    }
    return acc / md;
}

namespace {

// (1/L) exp(sign * j (L-1) pi x / L) sin(pi x) / sin(pi x / L), with the
// removable singularity at multiples of L filled by its limit.
cplx dirichlet(std::size_t len, double x, double sign) {
    const auto L = static_cast<double>(len);
    const cplx phase = std::polar(1.0, sign * (L - 1.0) * kPi * x / L);
    const double den = std::sin(kPi * x / L);
    double ratio;
    if (std::abs(den) < 1e-12) {
        ratio = L * std::cos(kPi * x) / std::cos(kPi * x / L);
    } else {
        ratio = std::sin(kPi * x) / den;
    }
    return phase * ratio / L;
}

}  // namespace

cplx rect_doppler_response(std::size_t n, double offset) { return dirichlet(n, offset, -1.0); }

cplx rect_delay_response(std::size_t m, double offset) { return dirichlet(m, offset, +1.0); }

cplx noise_filter_vz(const SeparableWindow& rx, long long k, long long l) {
    const std::size_t n = rx.doppler.size();
    const std::size_t m = rx.delay.size();
    const auto nd = static_cast<double>(n);
    const auto md = static_cast<double>(m);
    cplx acc{};
    for (std::size_t a = 0; a < n; ++a) {
        const cplx doppler_phase =
            std::polar(1.0, -2.0 * kPi * static_cast<double>(a) * static_cast<double>(k) / nd);
        for (std::size_t b = 0; b < m; ++b) {
            acc += rx.at(a, b) * doppler_phase *
                   std::polar(1.0, 2.0 * kPi * static_cast<double>(b) * static_cast<double>(l) / md);
        }
    }
    return acc / (nd * md);
}

CMatrix noise_filter_matrix(const SeparableWindow& rx) {
    // Separable: v_z[k,l] = Gv(k) Fv(l) with an all-ones partner.
    const std::size_t n = rx.doppler.size();
    const std::size_t m = rx.delay.size();
    SeparableWindow ones;
    ones.doppler.assign(n, cplx{1.0, 0.0});
    ones.delay.assign(m, cplx{1.0, 0.0});
    std::vector<cplx> g(n), f(m);
    for (std::size_t k = 0; k < n; ++k) g[k] = doppler_filter_response(ones, rx, static_cast<double>(k));
    for (std::size_t l = 0; l < m; ++l) f[l] = delay_filter_response(ones, rx, static_cast<double>(l));
    CMatrix out(n, m);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < m; ++l) out(k, l) = g[k] * f[l];
    }
    return out;
}

double ideal_window_response(double offset) {
    return (offset >= -0.5 && offset <= 0.5) ? 1.0 : 0.0;
}

double dc_sidelobe_for_mainlobe(double k_main, std::size_t n_doppler, MainlobeAngle convention) {
    if (!(k_main > 1.0) || !std::isfinite(k_main)) {
        throw std::invalid_argument("mainlobe width must exceed one bin");
    }
    if (n_doppler < 1) throw std::invalid_argument("N must be positive");
    const auto nd = static_cast<double>(n_doppler);
    const double theta = convention == MainlobeAngle::BinsToRadians
                             ? (k_main / 2.0) * (2.0 * kPi / nd)
                             : k_main / 2.0;
    const double c = std::cos(theta);
    if (1.0 + c <= 1e-15) throw std::invalid_argument("mainlobe angle outside formula domain");
    const double arg = (3.0 - c) / (1.0 + c);
    if (arg < 1.0) throw std::invalid_argument("acosh argument below one");
    const double level = std::cosh(nd / 2.0 * std::acosh(arg));
    if (!std::isfinite(level)) throw std::invalid_argument("sidelobe level overflows");
    return -20.0 * std::log10(level);
}

SidelobeMeasurement measure_sidelobes(const SeparableWindow& tx, const SeparableWindow& rx,
                                      double step) {
    require_same_lengths(tx, rx);
    if (!(step > 0.0)) throw std::invalid_argument("scan step must be positive");
    const auto nd = static_cast<double>(tx.doppler.size());
    const auto half = static_cast<long long>(std::floor(nd / 2.0 / step + 1e-9));
    const std::size_t count = static_cast<std::size_t>(2 * half + 1);

    std::vector<double> mag(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double nu = static_cast<double>(static_cast<long long>(i) - half) * step;
        mag[i] = std::abs(doppler_filter_response(tx, rx, nu));
    }
    const auto centre = static_cast<std::size_t>(half);
    const double peak = mag[centre];
    if (peak == 0.0) throw std::invalid_argument("window response vanishes at zero offset");

    std::size_t hi = centre;
    while (hi + 1 < count && mag[hi + 1] <= mag[hi]) ++hi;
    std::size_t lo = centre;
    while (lo > 0 && mag[lo - 1] <= mag[lo]) --lo;

    double side = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i < lo || i > hi) side = std::max(side, mag[i]);
    }
    SidelobeMeasurement out;
    out.peak_sidelobe = side / peak;
    out.peak_sidelobe_db = 20.0 * std::log10(out.peak_sidelobe);
    out.mainlobe_low = static_cast<double>(static_cast<long long>(lo) - half) * step;
    out.mainlobe_high = static_cast<double>(static_cast<long long>(hi) - half) * step;
    return out;
}

double effective_sidelobe_level(const SeparableWindow& tx, const SeparableWindow& rx) {
    if (tx.kind == WindowKind::Rectangular && rx.kind == WindowKind::Rectangular) {
        return 1.0 / static_cast<double>(tx.doppler.size());
    }
    return measure_sidelobes(tx, rx).peak_sidelobe;
}

namespace {

template <class F>
std::vector<ResponseSample> sample_lattice(std::size_t n, double resolution, F&& eval) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
    const auto half = static_cast<long long>(std::floor(static_cast<double>(n) / 2.0 / resolution + 1e-9));
    std::vector<ResponseSample> out;
    out.reserve(static_cast<std::size_t>(2 * half + 1));
    for (long long i = -half; i <= half; ++i) {
        const double nu = static_cast<double>(i) * resolution;
        const cplx v = eval(nu);
        const double mag = std::abs(v);
        out.push_back({nu, mag, 20.0 * std::log10(std::max(mag, 1e-300)), std::arg(v)});
    }
    return out;
}

}  // namespace

std::vector<ResponseSample> sample_doppler_response(const SeparableWindow& tx,
                                                    const SeparableWindow& rx,
                                                    double resolution, double shift) {
    return sample_lattice(tx.doppler.size(), resolution,
                          [&](double nu) { return doppler_filter_response(tx, rx, nu - shift); });
}

std::vector<ResponseSample> sample_ideal_response(std::size_t n_doppler, double resolution,
                                                  double shift) {
    return sample_lattice(n_doppler, resolution,
                          [&](double nu) { return cplx{ideal_window_response(nu - shift), 0.0}; });
}

std::string response_csv(const std::vector<ResponseSample>& samples) {
    std::string out = "offset_bins,magnitude,magnitude_db,phase_rad\n";
    char line[160];
    for (const auto& s : samples) {
        std::snprintf(line, sizeof line, "%.6f,%.12g,%.12g,%.12g\n", s.offset_bins, s.magnitude,
                      s.magnitude_db, s.phase_rad);
        out += line;
    }
    return out;
}

}  // namespace otfs
