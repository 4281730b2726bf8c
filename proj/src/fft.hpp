#pragma once

#include <complex>
#include <span>

namespace morrey::detail {

/// In-place unnormalized DFT of an n-dimensional N^n array.
/// sign = -1 is the forward transform, +1 the backward one.
/// Plans are cached per (n, N, sign) and safe to execute concurrently.
void fft_inplace(std::span<std::complex<double>> data, int dimension, int points_per_axis,
                 int sign);

}  // namespace morrey::detail
