#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace h2beta {

using cplx = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 FFT. The size of `a` must be a power of two.
/// Forward transform computes X_k = sum_j a_j exp(-2*pi*i*j*k/N); the inverse
/// includes the 1/N factor so that inverse(forward(a)) == a.
void fft_pow2(std::vector<cplx>& a, bool inverse = false);

}  // namespace h2beta
