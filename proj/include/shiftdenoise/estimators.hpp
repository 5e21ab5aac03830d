#pragma once

#include <optional>
#include <string>

#include "shiftdenoise/signal.hpp"
#include "shiftdenoise/solvers.hpp"

namespace shiftdenoise {

enum class FitMode { constrained, penalized };
enum class Side { bilateral, unilateral };

/// kappa ratio between estimation and filter window sizes:
/// sqrt((2n+1)/(2m+1)) bilateral, sqrt((n+1)/(m+1)) unilateral.
double kappa(long m, long n, Side side);

struct EstimatorConfig {
  long m = 1;
  long n = 0;
  std::optional<long> h;  // present: one-sided/predictive filter class
  FitMode mode = FitMode::constrained;
  double rho_bar = 1.0;  // constrained budget
  double lambda = 0.0;   // penalized weight; <= 0 requests the default choice
  double sigma = 1.0;    // noise level used by the penalized objective
  SolverOptions solver;
};

enum class FilterClass { bilateral, shifted };

/// Fitted or constructed filter. Bilateral filters hold 2m+1 taps on D_m;
/// shifted filters hold m+1 taps on {h..h+m}.
struct Filter {
  FilterClass cls = FilterClass::bilateral;
  long m = 0;
  long h = 0;
  cvec coeffs;
  bool converged = true;
  std::string note;

  Signal to_signal() const;
  long support_start() const { return cls == FilterClass::bilateral ? -m : h; }
  long support_stop() const { return cls == FilterClass::bilateral ? m : h + m; }
  double l2() const;
  /// Class norm: ||F_m[phi]||_1 (bilateral) or ||F_m^+ [shift-normalized phi]||_1.
  double fourier_l1() const;
  /// Same, with the filter embedded into a wider class of half-bandwidth at_m.
  double fourier_l1_at(long at_m) const;
};

/// Constrained least-squares fit over bilateral filters: minimize
/// ||y - phi*y||^2 on D_n subject to ||phi||^F_{m,1} <= rho_bar/sqrt(2m+1).
/// Solved in Fourier variables where the budget is an l1 ball.
Filter fit_constrained(const Signal& y, const EstimatorConfig& cfg);

/// Penalized variant: + sigma^2 lambda^2 (2m+1) (||phi||^F_{m,1})^2.
Filter fit_penalized(const Signal& y, const EstimatorConfig& cfg);

/// One-sided / predictive fit over filters supported on {h..h+m}, residual
/// taken over {-n..0}; cfg.mode selects constrained or penalized form.
Filter fit_predictive(const Signal& y, const EstimatorConfig& cfg);

/// Convolution estimate phi*y evaluated on a window (errors if y does not
/// cover the indices the filter reads).
Signal estimate(const Filter& phi, const Signal& y, const Domain& domain);

struct CompositeKnobs {
  double c_ratio = 1.0;
  double rho_edge_scale = 2.0;
  SolverOptions solver;
};

/// Full-domain recovery on D_N: a central two-sided fit on D_M stitched with
/// one-sided fits covering both edges. s is the assumed number of modes.
Signal denoise_full_composite(const Signal& y, long N, long s, const CompositeKnobs& knobs = {});

/// Blockwise application: one filter per block of size 2n+1, each applied
/// around its own center; boundary gaps reuse the nearest block's filter.
Signal blockwise_denoise(const Signal& y, const EstimatorConfig& cfg);

struct RemainderReport {
  double Q0 = 0.0;
  double Q1 = 0.0;
  double Q2 = 0.0;
  double kappa = 0.0;
  double suggested_lambda = 0.0;  // sqrt(Q1)
  // inputs echoed
  long m = 0, n = 0;
  double rho = 0.0, varkappa = 0.0, s = 0.0, alpha = 0.0;
  std::optional<double> lambda;
};

/// Closed-form remainder quantities entering the loss guarantees.
RemainderReport remainder_bounds(long m, long n, double rho, double varkappa, double s,
                                 double alpha, std::optional<double> lambda = std::nullopt);

}  // namespace shiftdenoise
