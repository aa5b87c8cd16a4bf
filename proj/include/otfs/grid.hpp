#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace otfs {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/**
 * Frame geometry shared by the delay-Doppler and time-frequency grids.
 *
 * n_doppler (N) is the number of time slots / Doppler bins, m_delay (M) the
 * number of subcarriers / delay bins. The grid is critically sampled, so the
 * slot duration is always 1/subcarrier_spacing_hz.
 */
struct GridDims {
    std::size_t n_doppler = 20;
    std::size_t m_delay = 30;
    double subcarrier_spacing_hz = 5e3;

    double slot_duration_s() const { return 1.0 / subcarrier_spacing_hz; }
    double bandwidth_hz() const { return static_cast<double>(m_delay) * subcarrier_spacing_hz; }
    double frame_duration_s() const { return static_cast<double>(n_doppler) * slot_duration_s(); }
    std::size_t size() const { return n_doppler * m_delay; }

    void validate() const;

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

// Dense row-major complex matrix. Rows are Doppler/time, columns delay/frequency.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols, cplx fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    // Indices reduced modulo the matrix shape.
    const cplx& wrapped(long long r, long long c) const;

    std::span<cplx> flat() { return data_; }
    std::span<const cplx> flat() const { return data_; }

    double energy() const;
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator*=(cplx s);

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Grids of the two domains share storage but are distinct types so a TF grid
// cannot be handed to a DD consumer by accident.
template <class Tag>
struct Grid {
    GridDims dims;
    CMatrix values;

    Grid() = default;
    explicit Grid(const GridDims& d) : dims(d), values(d.n_doppler, d.m_delay) {}
    Grid(const GridDims& d, CMatrix v) : dims(d), values(std::move(v)) {
        if (values.rows() != dims.n_doppler || values.cols() != dims.m_delay) {
            throw std::invalid_argument("grid values do not match dims");
        }
    }

    cplx& operator()(std::size_t r, std::size_t c) { return values(r, c); }
    const cplx& operator()(std::size_t r, std::size_t c) const { return values(r, c); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct DDTag {};
struct TFTag {};

/// x[k,l] / y[k,l]: row k is Doppler, column l is delay.
using DDGrid = Grid<DDTag>;
/// X[n,m] / Y[n,m]: row n is the time slot, column m the subcarrier.
using TFGrid = Grid<TFTag>;

template <class Tag>
Grid<Tag> operator+(const Grid<Tag>& a, const Grid<Tag>& b) {
    if (!(a.dims == b.dims)) throw std::invalid_argument("grid dims mismatch");
    return Grid<Tag>(a.dims, a.values + b.values);
}

}  // namespace otfs
