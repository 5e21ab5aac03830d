#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shiftdenoise/estimators.hpp"
#include "shiftdenoise/oracles.hpp"
#include "shiftdenoise/signal.hpp"

namespace shiftdenoise {

/// Complex Gaussian noise: independent real and imaginary parts, each of unit
/// variance, so E|zeta|^2 = 2 before scaling by sigma.
struct NoiseModel {
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

std::uint64_t splitmix64_next(std::uint64_t& state);
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial);

Signal gen_noise(const Domain& domain, const NoiseModel& model);

/// s random frequencies uniform on [0, 2pi) with unit-magnitude random-phase
/// amplitudes; returns the signal together with its subspace description.
std::pair<Signal, SubspaceSpec> gen_harmonic(int s, const Domain& domain, std::uint64_t seed);

/// Polynomially modulated modes: sum_k q_k(t) z_k^t, with one coefficient
/// vector per root (degree = multiplicity - 1).
Signal gen_generalized_harmonic(const SubspaceSpec& spec, const std::vector<cvec>& poly_coeffs,
                                const Domain& domain);

struct RiskStats {
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

struct RiskReport {
  int trials = 0;
  double sigma = 0.0;
  std::optional<EstimatorConfig> config;  // echoed when the run came from one
  std::vector<int> failed_trials;         // indices excluded from the statistics
  RiskStats l2;
  double normalized_mse = 0.0;  // sqrt(mean squared l2 loss / domain length)
  std::vector<double> per_trial_l2;
  std::vector<double> pointwise_rmse;  // per evaluation index
  long eval_start = 0;

  bool has_oracle = false;
  RiskStats oracle_l2;
  RiskStats excess;  // adaptive minus oracle loss, paired per trial
  RiskStats ratio;   // adaptive over oracle loss, trials with nonzero oracle loss
  std::vector<double> per_trial_oracle_l2;

  std::uint64_t master_seed = 0;
  std::string seed_derivation;
};

using DenoiseFn = std::function<Signal(const Signal& y)>;

/// Monte Carlo risk of an arbitrary denoiser: per trial, draw noise over the
/// signal support, run the denoiser, record losses over the evaluation
/// window. Trials run concurrently; statistics are assembled from the
/// canonical by-trial arrays, so results do not depend on thread count.
RiskReport mc_risk_fn(const Signal& x, const Domain& eval, const DenoiseFn& fn, double sigma,
                      int trials, std::uint64_t master_seed, int threads = 0);

/// Risk of the configured convolution estimator over D_n.
RiskReport mc_risk(const Signal& x, const EstimatorConfig& cfg, double sigma, int trials,
                   std::uint64_t master_seed, int threads = 0);

/// Paired comparison (same noise draws) of the adaptive fit against the
/// reproducing oracle filter built from the subspace description.
RiskReport oracle_comparison(const Signal& x, const SubspaceSpec& spec, const EstimatorConfig& cfg,
                             double sigma, int trials, std::uint64_t master_seed, int threads = 0);

}  // namespace shiftdenoise
