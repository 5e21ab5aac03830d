#pragma once

#include <complex>
#include <vector>

namespace shiftdenoise::fft {

using cx = std::complex<double>;
using cvec = std::vector<cx>;

/// Smallest transform length >= n that the backend handles fast.
std::size_t good_size(std::size_t n);

/// Unnormalized DFT with negative exponent, any length. In-place.
void forward(cvec& a);

/// Unnormalized DFT with positive exponent (unscaled inverse). In-place.
void backward(cvec& a);

/// Unitary DFT of a dense vector indexed 0..L-1 (negative exponent forward).
cvec unitary(const cvec& a, bool inverse);

/// Unitary DFT for vectors indexed over {-n..n}, a[i] holding index i-n.
/// Bin k of the result lands at position k+n. Length must be odd.
cvec unitary_centered(const cvec& a, bool inverse);

/// Linear convolution of two dense coefficient vectors.
cvec convolve(const cvec& a, const cvec& b);

}  // namespace shiftdenoise::fft
