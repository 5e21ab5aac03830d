#pragma once

#include <cstdint>
#include <vector>

#include "shiftdenoise/signal.hpp"

namespace testutil {

using shiftdenoise::cvec;
using shiftdenoise::cx;
using shiftdenoise::Signal;

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long integer(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  cx complex_unit_box() { return cx{uniform() - 0.5, uniform() - 0.5}; }
};

inline Signal random_signal(Rng& rng, long start, long len) {
  cvec v(static_cast<std::size_t>(len));
  for (auto& e : v) e = cx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return Signal(start, std::move(v));
}

inline cvec random_cvec(Rng& rng, std::size_t len) {
  cvec v(len);
  for (auto& e : v) e = cx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

inline double max_abs_diff(const Signal& a, const Signal& b) {
  const long lo = std::min(a.start(), b.start());
  const long hi = std::max(a.stop(), b.stop());
  double worst = 0.0;
  for (long t = lo; t <= hi; ++t) worst = std::max(worst, std::abs(a[t] - b[t]));
  return worst;
}

}  // namespace testutil
