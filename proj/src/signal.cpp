#include "shiftdenoise/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shiftdenoise/fft.hpp"

namespace shiftdenoise {

namespace {

// Below this output size direct summation beats FFT setup cost.
constexpr std::size_t kDirectConvThreshold = 64;

Signal trim(long start, cvec v) {
  std::size_t lo = 0, hi = v.size();
  while (lo < hi && v[lo] == cx{}) ++lo;
  while (hi > lo && v[hi - 1] == cx{}) --hi;
  if (lo == hi) return Signal{};
  return Signal(start + static_cast<long>(lo),
                cvec(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi)));
}

}  // namespace

Signal shift(const Signal& x, long tau) {
  if (x.empty()) return x;
  return Signal(x.start() + tau, x.values());
}

Signal reflect(const Signal& x) {
  if (x.empty()) return x;
  cvec v(x.values().rbegin(), x.values().rend());
  return Signal(-x.stop(), std::move(v));
}

Signal add(const Signal& a, const Signal& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const long start = std::min(a.start(), b.start());
  const long stop = std::max(a.stop(), b.stop());
  cvec v(static_cast<std::size_t>(stop - start + 1));
  for (long t = start; t <= stop; ++t) v[static_cast<std::size_t>(t - start)] = a[t] + b[t];
  return Signal(start, std::move(v));
}

Signal subtract(const Signal& a, const Signal& b) { return add(a, scale(b, cx{-1.0, 0.0})); }

Signal scale(const Signal& x, cx c) {
  cvec v = x.values();
  for (auto& e : v) e *= c;
  return Signal(x.start(), std::move(v));
}

Signal convolve(const Signal& a, const Signal& b) {
  if (a.empty() || b.empty()) return Signal{};
  const std::size_t out_len = a.size() + b.size() - 1;
  const long out_start = a.start() + b.start();
  if (out_len <= kDirectConvThreshold) {
    cvec out(out_len, cx{});
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a.values()[i] * b.values()[j];
    return trim(out_start, std::move(out));
  }
  return trim(out_start, fft::convolve(a.values(), b.values()));
}

Spectrum dft(const Signal& x, long n) {
  if (n < 0) throw std::invalid_argument("dft: n must be >= 0");
  Spectrum s;
  s.kind = SpectrumKind::bilateral;
  s.n = n;
  s.bins = fft::unitary_centered(x.slice(Domain::symmetric(n)), /*inverse=*/false);
  return s;
}

Signal idft(const Spectrum& s) {
  if (s.kind != SpectrumKind::bilateral) throw std::invalid_argument("idft: bilateral spectrum expected");
  return Signal(-s.n, fft::unitary_centered(s.bins, /*inverse=*/true));
}

Spectrum dft_unilateral(const Signal& x, long n) {
  if (n < 0) throw std::invalid_argument("dft_unilateral: n must be >= 0");
  Spectrum s;
  s.kind = SpectrumKind::unilateral;
  s.n = n;
  s.bins = fft::unitary(x.slice(Domain::one_sided(n)), /*inverse=*/false);
  return s;
}

Signal idft_unilateral(const Spectrum& s) {
  if (s.kind != SpectrumKind::unilateral)
    throw std::invalid_argument("idft_unilateral: unilateral spectrum expected");
  return Signal(0, fft::unitary(s.bins, /*inverse=*/true));
}

namespace {

double p_norm(const cvec& v, double p) {
  if (p < 1.0) throw std::invalid_argument("norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& e : v) m = std::max(m, std::abs(e));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& e : v) s += std::norm(e);
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& e : v) s += std::abs(e);
    return s;
  }
  double s = 0.0;
  for (const auto& e : v) s += std::pow(std::abs(e), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

double norm(const Signal& x, const Domain& d, double p, NormSpace space) {
  cvec slice = x.slice(d);
  if (space == NormSpace::time) return p_norm(slice, p);
  // Fourier-domain seminorm of the restricted slice: centered transform on
  // symmetric windows, one-sided transform otherwise (shifting a window does
  // not change the transform magnitudes, so D_m^h windows reduce to D_m^+).
  cvec bins = d.is_symmetric() ? fft::unitary_centered(slice, false) : fft::unitary(slice, false);
  return p_norm(bins, p);
}

cx inner(const Signal& x, const Signal& y, const Domain& d) {
  cx s{};
  for (long t = d.start; t <= d.stop(); ++t) s += std::conj(x[t]) * y[t];
  return s;
}

double fourier_l1_of_slice(const cvec& slice, bool centered) {
  cvec bins = centered ? fft::unitary_centered(slice, false) : fft::unitary(slice, false);
  double s = 0.0;
  for (const auto& e : bins) s += std::abs(e);
  return s;
}

}  // namespace shiftdenoise
