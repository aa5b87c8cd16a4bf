#include "otfs/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {

// twiddle[i] = exp(sign * j 2 pi i / len)
std::vector<cplx> twiddles(std::size_t len, double sign) {
    std::vector<cplx> t(len);
    for (std::size_t i = 0; i < len; ++i) {
        t[i] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(i) / static_cast<double>(len));
    }
    return t;
}

// Row-axis DFT with kernel exp(row_sign j 2 pi r r'/R), then column-axis DFT
// with kernel exp(col_sign j 2 pi c c'/C), scaled by 1/sqrt(RC).
CMatrix separable_dft(const CMatrix& in, double row_sign, double col_sign) {
    const std::size_t R = in.rows();
    const std::size_t C = in.cols();
    const auto tr = twiddles(R, row_sign);
    const auto tc = twiddles(C, col_sign);

    CMatrix tmp(R, C);
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t c = 0; c < C; ++c) {
            cplx acc{};
            for (std::size_t k = 0; k < R; ++k) acc += in(k, c) * tr[(r * k) % R];
            tmp(r, c) = acc;
        }
    }
    CMatrix out(R, C);
    const double scale = 1.0 / std::sqrt(static_cast<double>(R * C));
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t c = 0; c < C; ++c) {
            cplx acc{};
            for (std::size_t l = 0; l < C; ++l) acc += tmp(r, l) * tc[(c * l) % C];
            out(r, c) = acc * scale;
        }
    }
    return out;
}

}  // namespace

TFGrid isfft(const DDGrid& x) {
    return TFGrid(x.dims, separable_dft(x.values, +1.0, -1.0));
}

DDGrid sfft(const TFGrid& y) {
    return DDGrid(y.dims, separable_dft(y.values, -1.0, +1.0));
}

TFGrid apply_tf_window(const TFGrid& g, const SeparableWindow& win) {
    if (!win.matches(g.dims)) throw std::invalid_argument("window does not match grid dims");
    TFGrid out = g;
    for (std::size_t n = 0; n < g.dims.n_doppler; ++n) {
        for (std::size_t m = 0; m < g.dims.m_delay; ++m) out(n, m) *= win.at(n, m);
    }
    return out;
}

CMatrix circular_convolve(const CMatrix& a, const CMatrix& kernel) {
    if (a.rows() != kernel.rows() || a.cols() != kernel.cols()) {
        throw std::invalid_argument("convolution operands differ in shape");
    }
    // Convolution theorem with the unitary 2D DFT: conv = sqrt(RC) * IDFT(DFT(a) . DFT(kernel)).
    CMatrix spectrum = separable_dft(a, -1.0, -1.0);
    const CMatrix ks = separable_dft(kernel, -1.0, -1.0);
    auto s = spectrum.flat();
    auto k = ks.flat();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= k[i];
    CMatrix out = separable_dft(spectrum, +1.0, +1.0);
    out *= std::sqrt(static_cast<double>(a.rows() * a.cols()));
    return out;
}

}  // namespace otfs
