#include "shiftdenoise/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace shiftdenoise::fft {

namespace {

// One cached plan pair per transform length. Plans are created with
// FFTW_ESTIMATE (reproducible plan choice) and FFTW_UNALIGNED so they can be
// executed on arbitrary caller buffers. Creation is serialized; execution via
// fftw_execute_dft on distinct buffers is thread-safe.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
  static std::map<std::size_t, PlanPair> cache;
  return cache;
}

const PlanPair& plans_for(std::size_t n) {
  // Plans are immutable once created; threads memoize the lookup locally so
  // the global mutex is hit once per (thread, length).
  thread_local std::map<std::size_t, const PlanPair*> local;
  if (auto it = local.find(n); it != local.end()) return *it->second;

  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it == cache.end()) {
    cvec dummy(n);
    auto* buf = reinterpret_cast<fftw_complex*>(dummy.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
    if (p.fwd == nullptr || p.bwd == nullptr)
      throw std::runtime_error("fft: plan creation failed for length " + std::to_string(n));
    it = cache.emplace(n, p).first;
  }
  local.emplace(n, &it->second);
  return it->second;
}

void execute(const fftw_plan& plan, cvec& a) {
  auto* buf = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

std::size_t good_size(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void forward(cvec& a) {
  if (a.empty()) return;
  execute(plans_for(a.size()).fwd, a);
}

void backward(cvec& a) {
  if (a.empty()) return;
  execute(plans_for(a.size()).bwd, a);
}

cvec unitary(const cvec& a, bool inverse) {
  cvec out = a;
  if (inverse)
    backward(out);
  else
    forward(out);
  const double s = 1.0 / std::sqrt(static_cast<double>(a.size()));
  for (auto& v : out) v *= s;
  return out;
}

cvec unitary_centered(const cvec& a, bool inverse) {
  const std::size_t L = a.size();
  if (L % 2 == 0) throw std::invalid_argument("unitary_centered: length must be odd");
  const long n = static_cast<long>(L / 2);
  // Indices wrap modulo L, so centered indexing is a rotation of standard order.
  cvec buf(L);
  for (long i = -n; i <= n; ++i) buf[(i + static_cast<long>(L)) % L] = a[i + n];
  if (inverse)
    backward(buf);
  else
    forward(buf);
  cvec out(L);
  const double s = 1.0 / std::sqrt(static_cast<double>(L));
  for (long k = -n; k <= n; ++k) out[k + n] = buf[(k + static_cast<long>(L)) % L] * s;
  return out;
}

cvec convolve(const cvec& a, const cvec& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t L = good_size(out_len);
  cvec fa(L), fb(L);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  forward(fa);
  forward(fb);
  for (std::size_t i = 0; i < L; ++i) fa[i] *= fb[i];
  backward(fa);
  const double s = 1.0 / static_cast<double>(L);
  cvec out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i] * s;
  return out;
}

}  // namespace shiftdenoise::fft
