#pragma once

#include "otfs/grid.hpp"
#include "otfs/window.hpp"

namespace otfs {

/// DD -> TF: X[n,m] = 1/sqrt(NM) sum_k sum_l x[k,l] exp(j 2 pi (nk/N - ml/M)).
TFGrid isfft(const DDGrid& x);

/// TF -> DD: y[k,l] = 1/sqrt(NM) sum_n sum_m Y[n,m] exp(-j 2 pi (kn/N - lm/M)).
DDGrid sfft(const TFGrid& y);

/// out[n,m] = win.doppler[n] * win.delay[m] * g[n,m].
TFGrid apply_tf_window(const TFGrid& g, const SeparableWindow& win);

/// 2D circular convolution, out[k,l] = sum a[k',l'] kernel[(k-k')_N, (l-l')_M].
CMatrix circular_convolve(const CMatrix& a, const CMatrix& kernel);

}  // namespace otfs
