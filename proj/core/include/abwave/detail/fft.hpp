#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Thin FFTW wrapper. Forward transforms use exp(-2 pi i j m / n), unscaled,
// in place. Plans use FFTW_ESTIMATE so results do not depend on timing.
namespace abwave::detail {

void fft_forward(std::span<std::complex<double>> data);
/// Row-major data with x fastest (ny rows of nx samples).
void fft_forward_2d(std::span<std::complex<double>> data, std::size_t nx,
                    std::size_t ny);

/// Signed frequency index of FFT bin m: m for m < n/2, m - n otherwise.
inline long signed_bin(std::size_t m, std::size_t n) {
  return m < (n + 1) / 2 ? static_cast<long>(m)
                         : static_cast<long>(m) - static_cast<long>(n);
}

}  // namespace abwave::detail
