#include "otfs/grid.hpp"

#include <algorithm>
#include <cmath>

namespace otfs {

void GridDims::validate() const {
    if (n_doppler < 1 || m_delay < 1) {
        throw std::invalid_argument("grid needs at least one Doppler and one delay bin");
    }
    if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz)) {
        throw std::invalid_argument("subcarrier spacing must be positive");
    }
}

const cplx& CMatrix::wrapped(long long r, long long c) const {
    const auto R = static_cast<long long>(rows_);
    const auto C = static_cast<long long>(cols_);
    r %= R;
    if (r < 0) r += R;
    c %= C;
    if (c < 0) c += C;
    return (*this)(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

double CMatrix::energy() const {
    double e = 0.0;
    for (const auto& v : data_) e += std::norm(v);
    return e;
}

bool CMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) {
    a += b;
    return a;
}

CMatrix operator-(CMatrix a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] -= fb[i];
    return a;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shape mismatch");
    }
    double m = 0.0;
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::abs(fa[i] - fb[i]));
    return m;
}

}  // namespace otfs
