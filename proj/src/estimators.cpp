#include "shiftdenoise/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shiftdenoise/errors.hpp"
#include "shiftdenoise/fft.hpp"
#include "shiftdenoise/operators.hpp"

namespace shiftdenoise {

double kappa(long m, long n, Side side) {
  if (m < 0 || n < 0) throw ConfigError("kappa: m, n must be >= 0");
  if (side == Side::bilateral) return std::sqrt((2.0 * n + 1.0) / (2.0 * m + 1.0));
  return std::sqrt((n + 1.0) / (m + 1.0));
}

Signal Filter::to_signal() const { return Signal(support_start(), coeffs); }

double Filter::l2() const {
  double s = 0.0;
  for (const auto& e : coeffs) s += std::norm(e);
  return std::sqrt(s);
}

double Filter::fourier_l1() const { return fourier_l1_at(m); }

double Filter::fourier_l1_at(long at_m) const {
  if (at_m < m) throw ConfigError("Filter::fourier_l1_at: embedding class is narrower than the filter");
  if (cls == FilterClass::bilateral) {
    cvec padded(static_cast<std::size_t>(2 * at_m + 1), cx{});
    std::copy(coeffs.begin(), coeffs.end(), padded.begin() + (at_m - m));
    return fourier_l1_of_slice(padded, /*centered=*/true);
  }
  cvec padded(static_cast<std::size_t>(at_m + 1), cx{});
  std::copy(coeffs.begin(), coeffs.end(), padded.begin());
  return fourier_l1_of_slice(padded, /*centered=*/false);
}

namespace {

// Operator acting on Fourier coefficients of the filter: taps = F^H f, then
// the windowed convolution against y. The change of variables is unitary, so
// the Frobenius bound of the convolution map carries over unchanged.
LinearOperator fourier_variable_op(const WindowedConvOp& conv, bool centered) {
  auto base = conv.as_linear_operator();
  LinearOperator op;
  op.rows = base.rows;
  op.cols = base.cols;
  op.apply = [base, centered](const cvec& f) {
    cvec taps = centered ? fft::unitary_centered(f, true) : fft::unitary(f, true);
    return base.apply(taps);
  };
  op.adjoint = [base, centered](const cvec& r) {
    cvec taps = base.adjoint(r);
    return centered ? fft::unitary_centered(taps, false) : fft::unitary(taps, false);
  };
  return op;
}

double default_penalized_lambda(long m, long n) {
  // sqrt(Q1) with a clean-subspace residual and alpha = 0.1.
  const double k = kappa(m, n, Side::bilateral);
  const double q1 = (k * k + 1.0) * std::log((m + n) / 0.1) + 1.0;
  return std::sqrt(q1);
}

void require_bilateral_coverage(const Signal& y, long m, long n) {
  const Domain needed = Domain::symmetric(m + n);
  if (!y.covers(needed))
    throw DataError("fit: observations must cover [" + std::to_string(needed.start) + ", " +
                    std::to_string(needed.stop()) + "]");
}

Filter bilateral_fit(const Signal& y, const EstimatorConfig& cfg, bool penalized) {
  if (cfg.m < 1) throw ConfigError("fit: m must be >= 1");
  if (cfg.n < 0) throw ConfigError("fit: n must be >= 0");
  require_bilateral_coverage(y, cfg.m, cfg.n);

  const long m = cfg.m, n = cfg.n;
  WindowedConvOp win(y, -m, 2 * m + 1, -n, 2 * n + 1);
  LinearOperator A = fourier_variable_op(win, /*centered=*/true);
  const cvec b = y.slice(Domain::symmetric(n));
  const double opn = operator_norm(A, {}, win.frobenius_sq());

  SolverResult res;
  if (penalized) {
    double sigma = cfg.sigma;
    std::string note;
    if (sigma <= 0.0) {
      sigma = std::numeric_limits<double>::epsilon();
      note = "sigma clamped to machine epsilon for the penalty weight";
    }
    const double lambda = cfg.lambda > 0.0 ? cfg.lambda : default_penalized_lambda(m, n);
    const double c = sigma * sigma * lambda * lambda * (2.0 * m + 1.0);
    res = solve_penalized(A, b, c, cfg.solver, opn);
    Filter f;
    f.cls = FilterClass::bilateral;
    f.m = m;
    f.coeffs = fft::unitary_centered(res.solution, true);
    f.converged = res.converged;
    f.note = note;
    return f;
  }

  const double radius = cfg.rho_bar / std::sqrt(2.0 * m + 1.0);
  res = solve_constrained(A, b, radius, cfg.solver, opn);
  Filter f;
  f.cls = FilterClass::bilateral;
  f.m = m;
  f.coeffs = fft::unitary_centered(res.solution, true);
  f.converged = res.converged;
  return f;
}

}  // namespace

Filter fit_constrained(const Signal& y, const EstimatorConfig& cfg) {
  return bilateral_fit(y, cfg, /*penalized=*/false);
}

Filter fit_penalized(const Signal& y, const EstimatorConfig& cfg) {
  return bilateral_fit(y, cfg, /*penalized=*/true);
}

Filter fit_predictive(const Signal& y, const EstimatorConfig& cfg) {
  if (!cfg.h) throw ConfigError("fit_predictive: horizon h must be set");
  const long m = cfg.m, n = cfg.n, h = *cfg.h;
  if (m < 1) throw ConfigError("fit_predictive: m must be >= 1");
  if (n < 0) throw ConfigError("fit_predictive: n must be >= 0");
  if (h < 0) throw ConfigError("fit_predictive: h must be >= 0");

  // Residual over {-n..0}; the filter reads y on [-m-n-h, -h].
  const Domain fit_window = Domain::shifted(-n, n + 1);
  const Domain read_window = Domain::shifted(-m - n - h, m + n + 1);
  if (!y.covers(fit_window) || !y.covers(read_window))
    throw DataError("fit_predictive: observations must cover [" +
                    std::to_string(read_window.start) + ", " + std::to_string(read_window.stop()) +
                    "] and [" + std::to_string(fit_window.start) + ", " +
                    std::to_string(fit_window.stop()) + "]");

  // Shift-normalized taps u live on {0..m}: [phi*y]_t = [u*y]_{t-h}.
  WindowedConvOp win(y, 0, m + 1, -n - h, n + 1);
  LinearOperator A = fourier_variable_op(win, /*centered=*/false);
  const cvec b = y.slice(fit_window);
  const double opn = operator_norm(A, {}, win.frobenius_sq());

  SolverResult res;
  std::string note;
  if (cfg.mode == FitMode::penalized) {
    double sigma = cfg.sigma;
    if (sigma <= 0.0) {
      sigma = std::numeric_limits<double>::epsilon();
      note = "sigma clamped to machine epsilon for the penalty weight";
    }
    const double lambda = cfg.lambda > 0.0 ? cfg.lambda : default_penalized_lambda(m, n);
    const double c = sigma * sigma * lambda * lambda * (m + 1.0);
    res = solve_penalized(A, b, c, cfg.solver, opn);
  } else {
    const double radius = cfg.rho_bar / std::sqrt(m + 1.0);
    res = solve_constrained(A, b, radius, cfg.solver, opn);
  }

  Filter f;
  f.cls = FilterClass::shifted;
  f.m = m;
  f.h = h;
  f.coeffs = fft::unitary(res.solution, true);
  f.converged = res.converged;
  f.note = note;
  return f;
}

Signal estimate(const Filter& phi, const Signal& y, const Domain& domain) {
  const Domain needed{domain.start - phi.support_stop(),
                      domain.length + phi.support_stop() - phi.support_start()};
  if (!y.covers(needed))
    throw DataError("estimate: observations must cover [" + std::to_string(needed.start) + ", " +
                    std::to_string(needed.stop()) + "]");
  Signal conv = convolve(phi.to_signal(), y);
  return Signal(domain.start, conv.slice(domain));
}

Signal denoise_full_composite(const Signal& y, long N, long s, const CompositeKnobs& knobs) {
  if (s < 1) throw ConfigError("denoise_full_composite: s must be >= 1");
  if (N < 2) throw ConfigError("denoise_full_composite: N must be >= 2");
  if (!y.covers(Domain::symmetric(N)))
    throw DataError("denoise_full_composite: observations must cover [-" + std::to_string(N) +
                    ", " + std::to_string(N) + "]");

  // Central window size solving (M+1)/(N-M+1) ~ c_ratio * s * log(N+1).
  const double target = knobs.c_ratio * static_cast<double>(s) * std::log(N + 1.0);
  long M = std::lround((target * (N + 1.0) - 1.0) / (1.0 + target));
  const long M_lo = (N + 1) / 2, M_hi = N - 1;
  if (M_lo > M_hi) throw ConfigError("denoise_full_composite: N too small to split the domain");
  M = std::clamp(M, M_lo, M_hi);

  // Central two-sided fit on D_M.
  EstimatorConfig central;
  central.m = N - M;
  central.n = M;
  central.mode = FitMode::constrained;
  central.rho_bar = 4.0 * static_cast<double>(s);
  central.solver = knobs.solver;
  Filter phi_c = fit_constrained(y, central);
  Signal center_est = estimate(phi_c, y, Domain::symmetric(M));

  // Edge fits: one-sided filters on data brought to {-2N..0}, so the edge
  // window {M..N} maps onto the residual window {-(N-M)..0}.
  EstimatorConfig edge;
  edge.m = N + M;
  edge.n = N - M;
  edge.h = 0;
  edge.mode = FitMode::constrained;
  edge.rho_bar = knobs.rho_edge_scale * static_cast<double>(s) * static_cast<double>(s) *
                 std::log((2.0 * N + 1.0) * s + 1.0);
  edge.solver = knobs.solver;

  const Signal y_right = shift(y, -N);
  Filter phi_r = fit_predictive(y_right, edge);
  const Signal y_left = reflect(y);  // the left edge is the right edge of the reflection
  Filter phi_l = fit_predictive(shift(y_left, -N), edge);

  Signal right_conv = convolve(phi_r.to_signal(), y_right);
  Signal left_conv = convolve(phi_l.to_signal(), shift(y_left, -N));

  cvec out(static_cast<std::size_t>(2 * N + 1), cx{});
  for (long t = -N; t <= N; ++t) {
    cx v;
    if (t >= -M && t <= M)
      v = center_est[t];
    else if (t > M)
      v = right_conv[t - N];
    else
      v = left_conv[-t - N];
    out[static_cast<std::size_t>(t + N)] = v;
  }
  return Signal(-N, std::move(out));
}

Signal blockwise_denoise(const Signal& y, const EstimatorConfig& cfg) {
  if (y.empty()) throw DataError("blockwise_denoise: empty input");
  const long m = cfg.m, n = cfg.n;
  if (m < 1 || n < 0) throw ConfigError("blockwise_denoise: need m >= 1, n >= 0");
  const long a = y.start(), b = y.stop();
  const long len = b - a + 1;

  auto fit_at = [&](long center, long radius) {
    EstimatorConfig local = cfg;
    local.n = radius;
    const Signal z = shift(y, -center);
    Filter f = (cfg.mode == FitMode::penalized) ? fit_penalized(z, local) : fit_constrained(z, local);
    return f;
  };

  // Single fit when the domain cannot hold one full block with margins.
  if (len < 2 * (m + n) + 1) {
    const long radius = (len - 1) / 2 - m;
    if (radius < 0)
      throw DataError("blockwise_denoise: domain of length " + std::to_string(len) +
                      " is too short for bandwidth m=" + std::to_string(m));
    const long center = a + (len - 1) / 2;
    Filter f = fit_at(center, radius);
    Signal conv = convolve(f.to_signal(), y);
    return Signal(a, conv.slice(y.support()));
  }

  // Regular block centers, clamped so every fit window stays on data.
  const long c_lo = a + m + n, c_hi = b - m - n;
  std::vector<long> centers;
  for (long c = a + n; c - n <= b; c += 2 * n + 1) centers.push_back(std::clamp(c, c_lo, c_hi));
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  std::vector<Filter> filters(centers.size());
  std::vector<Signal> locals(centers.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < centers.size(); ++i) {
    filters[i] = fit_at(centers[i], n);
    locals[i] = convolve(filters[i].to_signal(), y);
  }

  cvec out(static_cast<std::size_t>(len), cx{});
  for (long t = a; t <= b; ++t) {
    std::size_t pick = 0;
    long best = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const long d = std::abs(t - centers[i]);
      if (d < best) {
        best = d;
        pick = i;
      }
    }
    out[static_cast<std::size_t>(t - a)] = locals[pick][t];
  }
  return Signal(a, std::move(out));
}

RemainderReport remainder_bounds(long m, long n, double rho, double varkappa, double s,
                                 double alpha, std::optional<double> lambda) {
  if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("remainder_bounds: alpha must lie in (0, 1]");
  if (m < 0 || n < 0) throw ConfigError("remainder_bounds: m, n must be >= 0");
  RemainderReport rep;
  rep.m = m;
  rep.n = n;
  rep.rho = rho;
  rep.varkappa = varkappa;
  rep.s = s;
  rep.alpha = alpha;
  rep.lambda = lambda;
  rep.kappa = kappa(m, n, Side::bilateral);
  const double k2p1 = rep.kappa * rep.kappa + 1.0;
  const double log_mn = std::log(static_cast<double>(m + n) / alpha);
  const double sqrt_log_inv = std::sqrt(std::log(1.0 / alpha));
  rep.Q0 = rho * k2p1 * log_mn + rho * varkappa * sqrt_log_inv + s;
  rep.Q1 = k2p1 * log_mn + varkappa * sqrt_log_inv + 1.0;
  rep.Q2 = rho * std::log(1.0 / alpha) + varkappa * sqrt_log_inv + s;
  rep.suggested_lambda = std::sqrt(rep.Q1);
  return rep;
}

}  // namespace shiftdenoise
