#pragma once

#include <complex>
#include <vector>

namespace shiftdenoise {

using cx = std::complex<double>;
using cvec = std::vector<cx>;

// All forward transforms use the negative exponent exp(-2*pi*i*k*tau/L).
inline constexpr int kDftForwardSign = -1;

/// Contiguous index window on the integer line.
struct Domain {
  long start = 0;
  long length = 1;

  static Domain symmetric(long n) { return {-n, 2 * n + 1}; }    // {-n..n}
  static Domain one_sided(long m) { return {0, m + 1}; }         // {0..m}
  static Domain shifted(long start, long length) { return {start, length}; }

  long stop() const { return start + length - 1; }
  bool contains(long t) const { return t >= start && t <= stop(); }
  bool is_symmetric() const { return start == -stop(); }
  bool operator==(const Domain&) const = default;
};

/// Finitely supported two-sided complex sequence. Reads off the stored
/// support return zero; values are immutable after construction.
class Signal {
 public:
  Signal() = default;
  Signal(long start, cvec values) : start_(start), v_(std::move(values)) {}

  static Signal dirac(long at, cx amp = cx{1.0, 0.0}) { return Signal(at, {amp}); }

  long start() const { return start_; }
  long stop() const { return start_ + static_cast<long>(v_.size()) - 1; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  cx operator[](long t) const {
    const long i = t - start_;
    if (i < 0 || i >= static_cast<long>(v_.size())) return cx{};
    return v_[static_cast<std::size_t>(i)];
  }

  const cvec& values() const { return v_; }
  Domain support() const { return {start_, static_cast<long>(v_.size())}; }
  bool covers(const Domain& d) const {
    return !empty() && start_ <= d.start && stop() >= d.stop();
  }

  /// Dense read over a window (zero-filled off support).
  cvec slice(const Domain& d) const {
    cvec out(static_cast<std::size_t>(d.length));
    for (long i = 0; i < d.length; ++i) out[static_cast<std::size_t>(i)] = (*this)[d.start + i];
    return out;
  }

 private:
  long start_ = 0;
  cvec v_;
};

Signal shift(const Signal& x, long tau);
Signal reflect(const Signal& x);
Signal add(const Signal& a, const Signal& b);
Signal subtract(const Signal& a, const Signal& b);
Signal scale(const Signal& x, cx c);

/// Exact discrete convolution. Direct summation for small outputs, FFT
/// otherwise; the two paths agree to floating tolerance.
Signal convolve(const Signal& a, const Signal& b);

enum class SpectrumKind { bilateral, unilateral };

/// DFT bins, indexed by k in {-n..n} (bilateral) or {0..n} (unilateral).
struct Spectrum {
  SpectrumKind kind = SpectrumKind::bilateral;
  long n = 0;
  cvec bins;

  cx at(long k) const {
    const long i = (kind == SpectrumKind::bilateral) ? k + n : k;
    return bins[static_cast<std::size_t>(i)];
  }
};

/// Unitary DFT over {-n..n} with normalization 1/sqrt(2n+1).
Spectrum dft(const Signal& x, long n);
Signal idft(const Spectrum& s);

/// Unitary DFT over {0..n} with normalization 1/sqrt(n+1).
Spectrum dft_unilateral(const Signal& x, long n);
Signal idft_unilateral(const Spectrum& s);

enum class NormSpace { time, fourier };

/// p-norm (p >= 1, or infinity) of x restricted to a window, either of the
/// time-domain values or of the unitary DFT of the restricted slice.
double norm(const Signal& x, const Domain& d, double p, NormSpace space);

/// <x,y> over a window, conjugate-linear in the first argument.
cx inner(const Signal& x, const Signal& y, const Domain& d);

double fourier_l1_of_slice(const cvec& slice, bool centered);

}  // namespace shiftdenoise
