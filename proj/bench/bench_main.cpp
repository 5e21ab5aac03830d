// Timing comparison of the serial reference kernels against the production
// paths: direct-sum vs FFT convolution/DFT, and single-thread vs OpenMP
// Monte Carlo. Prints a table; returns nonzero if any pair disagrees.

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "shiftdenoise/harness.hpp"
#include "shiftdenoise/reference.hpp"
#include "shiftdenoise/signal.hpp"

using namespace shiftdenoise;

namespace {

std::uint64_t rng_state = 0x5eed5eed5eedull;
double next_uniform() {
  std::uint64_t z = (rng_state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
}

Signal random_signal(long start, long len) {
  cvec v(static_cast<std::size_t>(len));
  for (auto& e : v) e = cx{2.0 * next_uniform() - 1.0, 2.0 * next_uniform() - 1.0};
  return Signal(start, std::move(v));
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = omp_get_wtime();
    fn();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

double max_diff(const Signal& a, const Signal& b) {
  const long lo = std::min(a.start(), b.start());
  const long hi = std::max(a.stop(), b.stop());
  double worst = 0.0;
  for (long t = lo; t <= hi; ++t) worst = std::max(worst, std::abs(a[t] - b[t]));
  return worst;
}

}  // namespace

int main() {
  int failures = 0;

  std::printf("== convolution: direct-sum reference vs FFT path ==\n");
  std::printf("%8s %14s %14s %9s %10s\n", "n", "reference(s)", "fft(s)", "speedup", "agree");
  for (long n : {64L, 256L, 1024L, 4096L}) {
    const Signal a = random_signal(-n / 2, n);
    const Signal b = random_signal(-n / 2, n);
    Signal out_ref, out_fft;
    const double t_ref = time_best_of(3, [&] { out_ref = reference::convolve(a, b); });
    const double t_fft = time_best_of(3, [&] { out_fft = convolve(a, b); });
    const double diff = max_diff(out_ref, out_fft);
    const bool ok = diff < 1e-8 * static_cast<double>(n);
    if (!ok) ++failures;
    std::printf("%8ld %14.6f %14.6f %8.1fx %10s\n", n, t_ref, t_fft, t_ref / t_fft,
                ok ? "yes" : "NO");
  }

  std::printf("\n== centered DFT: direct summation vs FFT path ==\n");
  std::printf("%8s %14s %14s %9s %10s\n", "2n+1", "reference(s)", "fft(s)", "speedup", "agree");
  for (long n : {64L, 256L, 1024L}) {
    const Signal x = random_signal(-n, 2 * n + 1);
    Spectrum s_ref, s_fft;
    const double t_ref = time_best_of(3, [&] { s_ref = reference::dft(x, n); });
    const double t_fft = time_best_of(3, [&] { s_fft = dft(x, n); });
    double diff = 0.0;
    for (std::size_t i = 0; i < s_ref.bins.size(); ++i)
      diff = std::max(diff, std::abs(s_ref.bins[i] - s_fft.bins[i]));
    const bool ok = diff < 1e-9 * static_cast<double>(n);
    if (!ok) ++failures;
    std::printf("%8ld %14.6f %14.6f %8.1fx %10s\n", 2 * n + 1, t_ref, t_fft, t_ref / t_fft,
                ok ? "yes" : "NO");
  }

  std::printf("\n== Monte Carlo risk: 1 thread vs %d threads ==\n", omp_get_max_threads());
  std::printf("%8s %14s %14s %9s %10s\n", "trials", "serial(s)", "parallel(s)", "speedup",
              "identical");
  {
    const long m = 24, n = 24;
    auto [x, spec] = gen_harmonic(2, Domain::symmetric(m + n), 7);
    EstimatorConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.rho_bar = 8.0;
    for (int trials : {16, 64}) {
      RiskReport serial, parallel;
      const double t1 = time_best_of(1, [&] { serial = mc_risk(x, cfg, 0.5, trials, 99, 1); });
      const double tp = time_best_of(
          1, [&] { parallel = mc_risk(x, cfg, 0.5, trials, 99, omp_get_max_threads()); });
      bool same = serial.per_trial_l2.size() == parallel.per_trial_l2.size();
      if (same)
        for (std::size_t i = 0; i < serial.per_trial_l2.size(); ++i)
          same = same && serial.per_trial_l2[i] == parallel.per_trial_l2[i];
      if (!same) ++failures;
      std::printf("%8d %14.3f %14.3f %8.1fx %10s\n", trials, t1, tp, t1 / tp, same ? "yes" : "NO");
    }
  }

  if (failures > 0) std::printf("\n%d benchmark check(s) disagreed\n", failures);
  return failures == 0 ? 0 : 1;
}
