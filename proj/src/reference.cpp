#include "shiftdenoise/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shiftdenoise::reference {

Signal convolve(const Signal& a, const Signal& b) {
  if (a.empty() || b.empty()) return Signal{};
  const long start = a.start() + b.start();
  const long stop = a.stop() + b.stop();
  cvec out(static_cast<std::size_t>(stop - start + 1), cx{});
  for (long t = start; t <= stop; ++t) {
    cx acc{};
    for (long tau = a.start(); tau <= a.stop(); ++tau) acc += a[tau] * b[t - tau];
    out[static_cast<std::size_t>(t - start)] = acc;
  }
  return Signal(start, std::move(out));
}

Spectrum dft(const Signal& x, long n) {
  if (n < 0) throw std::invalid_argument("reference::dft: n must be >= 0");
  const long L = 2 * n + 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  Spectrum s;
  s.kind = SpectrumKind::bilateral;
  s.n = n;
  s.bins.resize(static_cast<std::size_t>(L));
  for (long k = -n; k <= n; ++k) {
    cx acc{};
    for (long tau = -n; tau <= n; ++tau) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(tau) / static_cast<double>(L);
      acc += std::polar(1.0, ang) * x[tau];
    }
    s.bins[static_cast<std::size_t>(k + n)] = acc * scale;
  }
  return s;
}

Signal idft(const Spectrum& s) {
  const long n = s.n;
  const long L = 2 * n + 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  cvec out(static_cast<std::size_t>(L));
  for (long tau = -n; tau <= n; ++tau) {
    cx acc{};
    for (long k = -n; k <= n; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(tau) / static_cast<double>(L);
      acc += std::polar(1.0, ang) * s.bins[static_cast<std::size_t>(k + n)];
    }
    out[static_cast<std::size_t>(tau + n)] = acc * scale;
  }
  return Signal(-n, std::move(out));
}

Spectrum dft_unilateral(const Signal& x, long n) {
  if (n < 0) throw std::invalid_argument("reference::dft_unilateral: n must be >= 0");
  const long L = n + 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  Spectrum s;
  s.kind = SpectrumKind::unilateral;
  s.n = n;
  s.bins.resize(static_cast<std::size_t>(L));
  for (long k = 0; k <= n; ++k) {
    cx acc{};
    for (long tau = 0; tau <= n; ++tau) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(tau) / static_cast<double>(L);
      acc += std::polar(1.0, ang) * x[tau];
    }
    s.bins[static_cast<std::size_t>(k)] = acc * scale;
  }
  return s;
}

}  // namespace shiftdenoise::reference
