#include "shiftdenoise/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>

#include "shiftdenoise/fft.hpp"

namespace shiftdenoise {

namespace {

constexpr std::size_t kDirectThreshold = 64;

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_uniform(uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

double vec_norm(const cvec& v) {
  double s = 0.0;
  for (const auto& e : v) s += std::norm(e);
  return std::sqrt(s);
}

cvec conv_dense(const cvec& a, const cvec& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  if (out_len <= kDirectThreshold) {
    cvec out(out_len, cx{});
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  return fft::convolve(a, b);
}

}  // namespace

WindowedConvOp::WindowedConvOp(Signal y, long filter_start, long filter_len, long out_start,
                               long out_len)
    : y_(std::move(y)), fstart_(filter_start), flen_(filter_len), ostart_(out_start), olen_(out_len) {
  if (flen_ < 1 || olen_ < 1) throw std::invalid_argument("WindowedConvOp: empty window");
  // The forward map reads y on [c - flen + 1, c + olen - 1] with c = ostart - fstart.
  const long c = ostart_ - fstart_;
  y_fwd_start_ = c - flen_ + 1;
  y_fwd_ = y_.slice(Domain::shifted(y_fwd_start_, olen_ + flen_ - 1));
  y_rev_conj_.assign(y_fwd_.rbegin(), y_fwd_.rend());
  for (auto& e : y_rev_conj_) e = std::conj(e);
}

cvec WindowedConvOp::apply(const cvec& u) const {
  if (static_cast<long>(u.size()) != flen_)
    throw std::invalid_argument("WindowedConvOp::apply: expected dimension " + std::to_string(flen_));
  cvec conv = conv_dense(u, y_fwd_);
  cvec out(static_cast<std::size_t>(olen_));
  for (long i = 0; i < olen_; ++i) out[static_cast<std::size_t>(i)] = conv[static_cast<std::size_t>(i + flen_ - 1)];
  return out;
}

cvec WindowedConvOp::adjoint(const cvec& r) const {
  if (static_cast<long>(r.size()) != olen_)
    throw std::invalid_argument("WindowedConvOp::adjoint: expected dimension " + std::to_string(olen_));
  // (A^H r)_j = sum_i conj(y_{c+i-j}) r_i  ==  (r * h)_{olen-1+j} with
  // h = conj(y_fwd_ reversed).
  cvec conv = conv_dense(r, y_rev_conj_);
  cvec out(static_cast<std::size_t>(flen_));
  for (long j = 0; j < flen_; ++j)
    out[static_cast<std::size_t>(j)] = conv[static_cast<std::size_t>(olen_ - 1 + j)];
  return out;
}

LinearOperator WindowedConvOp::as_linear_operator() const {
  auto self = std::make_shared<WindowedConvOp>(*this);
  LinearOperator op;
  op.rows = static_cast<std::size_t>(olen_);
  op.cols = static_cast<std::size_t>(flen_);
  op.apply = [self](const cvec& u) { return self->apply(u); };
  op.adjoint = [self](const cvec& r) { return self->adjoint(r); };
  return op;
}

double WindowedConvOp::frobenius_sq() const {
  // Entry (i, j) is y_{c+i-j}; count how many cells each y value occupies.
  double total = 0.0;
  const long c = ostart_ - fstart_;
  for (long u = y_fwd_start_; u <= c + olen_ - 1; ++u) {
    const long lo = std::max(0L, u - c);
    const long hi = std::min(olen_ - 1, u - c + flen_ - 1);
    if (hi < lo) continue;
    total += static_cast<double>(hi - lo + 1) * std::norm(y_[u]);
  }
  return total;
}

ToeplitzOp::ToeplitzOp(Signal y, long m, long n)
    : op_(y, -m, 2 * m + 1, -n, 2 * n + 1), y_(std::move(y)), m_(m), n_(n) {
  if (m < 0 || n < 0) throw std::invalid_argument("ToeplitzOp: m, n must be >= 0");
}

cvec ToeplitzOp::apply(const cvec& phi) const { return op_.apply(phi); }
cvec ToeplitzOp::adjoint(const cvec& r) const { return op_.adjoint(r); }
LinearOperator ToeplitzOp::as_linear_operator() const { return op_.as_linear_operator(); }

double ToeplitzOp::frobenius_sq() const {
  double total = 0.0;
  for (long tau = -m_; tau <= m_; ++tau)
    for (long t = -n_; t <= n_; ++t) total += std::norm(y_[t - tau]);
  return total;
}

BandedOp::BandedOp(cvec phi_on_dm, long m, long n) : phi_(std::move(phi_on_dm)), m_(m), n_(n) {
  if (static_cast<long>(phi_.size()) != 2 * m + 1)
    throw std::invalid_argument("BandedOp: filter must have 2m+1 coefficients");
}

cvec BandedOp::apply(const cvec& y_slice) const {
  if (static_cast<long>(y_slice.size()) != 2 * m_ + 2 * n_ + 1)
    throw std::invalid_argument("BandedOp::apply: expected dimension " +
                                std::to_string(2 * m_ + 2 * n_ + 1));
  cvec conv = conv_dense(phi_, y_slice);
  // conv index t + 2m + n holds [phi*y]_t.
  cvec out(static_cast<std::size_t>(2 * n_ + 1));
  for (long t = -n_; t <= n_; ++t)
    out[static_cast<std::size_t>(t + n_)] = conv[static_cast<std::size_t>(t + 2 * m_ + n_)];
  return out;
}

double BandedOp::frobenius_sq() const {
  double s = 0.0;
  for (const auto& e : phi_) s += std::norm(e);
  return static_cast<double>(2 * n_ + 1) * s;
}

namespace {

cvec zero_pad_centered(const cvec& u_on_dm, long m, long n) {
  if (static_cast<long>(u_on_dm.size()) != 2 * m + 1)
    throw std::invalid_argument("expected 2m+1 coefficients");
  cvec padded(static_cast<std::size_t>(2 * (m + n) + 1), cx{});
  std::copy(u_on_dm.begin(), u_on_dm.end(), padded.begin() + n);
  return padded;
}

}  // namespace

cvec circulant_eigenvalues(const cvec& phi_on_dm, long m, long n) {
  const long L = 2 * m + 2 * n + 1;
  cvec bins = fft::unitary_centered(zero_pad_centered(phi_on_dm, m, n), false);
  const double s = std::sqrt(static_cast<double>(L));
  for (auto& e : bins) e *= s;
  return bins;
}

cvec circulant_apply(const cvec& phi_on_dm, long m, long n, const cvec& v) {
  const long L = 2 * m + 2 * n + 1;
  if (static_cast<long>(v.size()) != L)
    throw std::invalid_argument("circulant_apply: expected dimension " + std::to_string(L));
  cvec eig = circulant_eigenvalues(phi_on_dm, m, n);
  cvec fv = fft::unitary_centered(v, false);
  for (long i = 0; i < L; ++i)
    fv[static_cast<std::size_t>(i)] *= eig[static_cast<std::size_t>(i)];
  return fft::unitary_centered(fv, true);
}

double zero_pad_fourier_l1(const cvec& u_on_dm, long m, long n) {
  cvec bins = fft::unitary_centered(zero_pad_centered(u_on_dm, m, n), false);
  double s = 0.0;
  for (const auto& e : bins) s += std::abs(e);
  return s;
}

double operator_norm(const LinearOperator& A, const PowerIterOptions& opts,
                     std::optional<double> frobenius_fallback) {
  if (opts.iters < 1) throw std::invalid_argument("operator_norm: iters must be >= 1");
  const std::size_t dim = A.cols;
  if (dim == 0) return 0.0;

  uint64_t state = 0x9E3779B97F4A7C15ull ^ (static_cast<uint64_t>(dim) * 0xD1B54A32D192ED03ull);
  cvec v(dim);
  for (auto& e : v) e = cx{unit_uniform(state) - 0.5, unit_uniform(state) - 0.5};
  double nv = vec_norm(v);
  if (nv == 0.0) return 0.0;
  for (auto& e : v) e /= nv;

  double prev = 0.0;
  for (int it = 0; it < opts.iters; ++it) {
    cvec w = A.adjoint(A.apply(v));
    // Rayleigh quotient of A^H A at the unit vector v.
    cx rq{};
    for (std::size_t i = 0; i < dim; ++i) rq += std::conj(v[i]) * w[i];
    const double lambda = std::max(0.0, rq.real());
    const double est = std::sqrt(lambda);
    const double nw = vec_norm(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(est - prev) <= opts.tol * std::max(est, 1e-300)) return est;
    prev = est;
  }
  if (frobenius_fallback) return std::sqrt(*frobenius_fallback);
  return prev;
}

}  // namespace shiftdenoise
