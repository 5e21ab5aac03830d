#pragma once

#include <functional>
#include <optional>

#include "shiftdenoise/signal.hpp"

namespace shiftdenoise {

/// Matrix-free linear map between dense complex vectors.
struct LinearOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<cvec(const cvec&)> apply;
  std::function<cvec(const cvec&)> adjoint;
};

/// u (taps on {filter_start .. filter_start+filter_len-1}) -> [u*y]_t for t in
/// the output window. The workhorse behind the convolution system matrices.
class WindowedConvOp {
 public:
  WindowedConvOp(Signal y, long filter_start, long filter_len, long out_start, long out_len);

  cvec apply(const cvec& u) const;
  cvec adjoint(const cvec& r) const;
  LinearOperator as_linear_operator() const;

  long filter_len() const { return flen_; }
  long out_len() const { return olen_; }
  double frobenius_sq() const;

 private:
  Signal y_;
  long fstart_, flen_, ostart_, olen_;
  cvec y_fwd_;       // y values covering the indices the forward map touches
  cvec y_rev_conj_;  // conjugate-reversed copy used by the adjoint
  long y_fwd_start_;
};

/// Map phi on D_m -> [phi*y]_{-n}^{n}, of shape (2n+1) x (2m+1).
class ToeplitzOp {
 public:
  ToeplitzOp(Signal y, long m, long n);

  cvec apply(const cvec& phi) const;
  cvec adjoint(const cvec& r) const;
  LinearOperator as_linear_operator() const;

  long m() const { return m_; }
  long n() const { return n_; }
  double frobenius_sq() const;  // sum over tau in D_m of ||shift(y,tau)||^2_{n,2}

 private:
  WindowedConvOp op_;
  Signal y_;
  long m_, n_;
};

/// Map [y]_{-m-n}^{m+n} -> [phi*y]_{-n}^{n}, of shape (2n+1) x (2m+2n+1).
class BandedOp {
 public:
  BandedOp(cvec phi_on_dm, long m, long n);

  cvec apply(const cvec& y_slice) const;
  double frobenius_sq() const;  // (2n+1) * ||phi||^2

  long m() const { return m_; }
  long n() const { return n_; }

 private:
  cvec phi_;
  long m_, n_;
};

/// Eigenvalues of the circulant extension of phi (on D_m) of size 2m+2n+1:
/// sqrt(2m+2n+1) times the centered unitary DFT of the zero-padded filter.
cvec circulant_eigenvalues(const cvec& phi_on_dm, long m, long n);

/// Multiply the circulant by a vector indexed over D_{m+n}, via its
/// eigenvalues (circular convolution).
cvec circulant_apply(const cvec& phi_on_dm, long m, long n, const cvec& v);

/// l1 norm of the centered unitary DFT after zero-padding from D_m to D_{m+n}.
double zero_pad_fourier_l1(const cvec& u_on_dm, long m, long n);

struct PowerIterOptions {
  int iters = 50;
  double tol = 1e-8;
};

/// Largest-singular-value estimate by power iteration on A^H A. Deterministic
/// (fixed-seed start). Falls back to the supplied Frobenius upper bound when
/// the iteration does not settle.
double operator_norm(const LinearOperator& A, const PowerIterOptions& opts = {},
                     std::optional<double> frobenius_fallback = std::nullopt);

}  // namespace shiftdenoise
