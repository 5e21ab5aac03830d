#pragma once

#include "shiftdenoise/signal.hpp"

// Serial reference implementations of the transform and convolution kernels.
// These are direct-summation, O(n^2) code paths with no FFT and no threading,
// kept as independent oracles for the test suite and as the baseline for the
// benchmark target.
namespace shiftdenoise::reference {

Signal convolve(const Signal& a, const Signal& b);

Spectrum dft(const Signal& x, long n);
Signal idft(const Spectrum& s);

Spectrum dft_unilateral(const Signal& x, long n);

}  // namespace shiftdenoise::reference
