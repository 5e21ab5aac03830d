#pragma once

#include <vector>

#include "shiftdenoise/estimators.hpp"
#include "shiftdenoise/signal.hpp"

namespace shiftdenoise {

struct Mode {
  double omega = 0.0;  // radians in [0, 2*pi)
  int mult = 1;
};

struct Root {
  cx z;
  int mult = 1;
};

/// Shift-invariant subspace described by the characteristic polynomial
/// p(z) = 1 + p_1 z + ... + p_s z^s (p(0) = 1), or equivalently by its roots.
/// Solutions of p applied to the shift are spanned by t^j z^t.
class SubspaceSpec {
 public:
  static SubspaceSpec from_modes(std::vector<Mode> modes);
  static SubspaceSpec from_poly(cvec poly);

  int dimension() const { return s_; }
  const cvec& poly() const { return poly_; }
  const std::vector<Root>& roots() const { return roots_; }

  bool unit_modulus(double tol = 1e-7) const;
  /// Frequencies for unit-modulus specs; throws otherwise.
  std::vector<Mode> modes(double tol = 1e-7) const;

 private:
  SubspaceSpec() = default;
  int s_ = 0;
  cvec poly_;
  std::vector<Root> roots_;
};

/// Sampled basis t^j z_k^t, j < mult_k, over the window. The elements are
/// linearly independent once the window holds at least dim samples.
std::vector<Signal> basis_from_spec(const SubspaceSpec& spec, const Domain& domain);

/// max_t | sum_tau p_tau x_{t-tau} | over the window.
double check_difference_equation(const SubspaceSpec& spec, const Signal& x, const Domain& domain);

/// Bilateral filter reproducing every subspace element exactly, with
/// ||phi||_2 <= sqrt(2s/(2m+1)). Depends only on the subspace.
Filter interpolating_filter(const SubspaceSpec& spec, long m);

/// Variant taking the center row of the projector over the full window
/// {-m..m}. Same exact-reproduction property; often a smaller Fourier-domain
/// l1 norm (for constants it is the plain averaging window), but without the
/// general norm guarantee of interpolating_filter.
Filter interpolating_filter_centered(const SubspaceSpec& spec, long m);

/// One-sided reproducing filter for distinct frequencies, from the last row
/// of the Vandermonde-span projector.
Filter predictive_filter_separated(const std::vector<double>& omegas, long m);

/// Minimal wrap-around distance between distinct frequencies.
double min_frequency_separation(const std::vector<double>& omegas);

/// One-sided reproducing filter for unit-modulus specs built by truncated
/// power-series division of 1/p(delta*z); valid for m above a s^2 log s
/// threshold (throws below it, naming the requirement).
Filter predictive_filter_unit_roots(const SubspaceSpec& spec, long m);

/// Threshold on m below which predictive_filter_unit_roots refuses to run.
long unit_roots_min_bandwidth(int s);

/// The autoconvolution phi*phi, doubling the support.
Filter square_oracle(const Filter& phi);

struct SimplicityCertificate {
  double rho = 0.0;
  double theta = 0.0;
  long m = 0, n = 0, h = 0;
};

/// rho/theta pair of a filter against a signal: scaled filter norm and the
/// worst reproduction bias over the class-appropriate window.
SimplicityCertificate simplicity_certificate(const Filter& phi, const Signal& x, double sigma,
                                             long n);

/// Worst-case projection residual max_tau ||shift-window residual||/sigma
/// against the subspace sampled on the estimation window.
double shift_invariance_residual(const Signal& x, const SubspaceSpec& spec, long m, long n,
                                 double sigma, Side side, long h = 0);

/// Bias-parameter inflation caused by an approximate-invariance residual.
double theta_inflation(double theta, double varkappa, long m, long n, Side side);

}  // namespace shiftdenoise
