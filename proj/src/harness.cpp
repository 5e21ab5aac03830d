#include "shiftdenoise/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "shiftdenoise/errors.hpp"

namespace shiftdenoise {

namespace {

constexpr char kSeedDerivation[] = "splitmix64(master + 0x9E3779B97F4A7C15 * (trial + 1))";

double unit_uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

// One Box-Muller transform yields the real and imaginary parts of a sample.
cx standard_complex_gaussian(std::uint64_t& state) {
  const double u1 = unit_uniform(state);
  const double u2 = unit_uniform(state);
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return cx{r * std::cos(ang), r * std::sin(ang)};
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

RiskStats stats_of(const std::vector<double>& values) {
  RiskStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.median = quantile(sorted, 0.5);
  s.q10 = quantile(sorted, 0.1);
  s.q90 = quantile(sorted, 0.9);
  return s;
}

}  // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  std::uint64_t state = master_seed + 0x9E3779B97F4A7C15ull * (trial + 1);
  return splitmix64_next(state);
}

Signal gen_noise(const Domain& domain, const NoiseModel& model) {
  if (model.sigma < 0.0) throw ConfigError("gen_noise: sigma must be >= 0");
  cvec v(static_cast<std::size_t>(domain.length), cx{});
  if (model.sigma > 0.0) {
    std::uint64_t state = model.seed;
    for (auto& e : v) e = model.sigma * standard_complex_gaussian(state);
  }
  return Signal(domain.start, std::move(v));
}

std::pair<Signal, SubspaceSpec> gen_harmonic(int s, const Domain& domain, std::uint64_t seed) {
  if (s < 1) throw ConfigError("gen_harmonic: s must be >= 1");
  std::uint64_t state = seed;
  std::vector<Mode> modes;
  cvec amps;
  for (int k = 0; k < s; ++k) {
    modes.push_back({2.0 * std::numbers::pi * unit_uniform(state), 1});
    amps.push_back(std::polar(1.0, 2.0 * std::numbers::pi * unit_uniform(state)));
  }
  cvec v(static_cast<std::size_t>(domain.length), cx{});
  for (long i = 0; i < domain.length; ++i) {
    const long t = domain.start + i;
    cx acc{};
    for (int k = 0; k < s; ++k)
      acc += amps[static_cast<std::size_t>(k)] *
             std::polar(1.0, modes[static_cast<std::size_t>(k)].omega * static_cast<double>(t));
    v[static_cast<std::size_t>(i)] = acc;
  }
  return {Signal(domain.start, std::move(v)), SubspaceSpec::from_modes(modes)};
}

Signal gen_generalized_harmonic(const SubspaceSpec& spec, const std::vector<cvec>& poly_coeffs,
                                const Domain& domain) {
  const auto& roots = spec.roots();
  if (poly_coeffs.size() != roots.size())
    throw ConfigError("gen_generalized_harmonic: one coefficient vector per root expected");
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (static_cast<int>(poly_coeffs[k].size()) != roots[k].mult)
      throw ConfigError("gen_generalized_harmonic: coefficient count must equal the multiplicity");
  cvec v(static_cast<std::size_t>(domain.length), cx{});
  for (long i = 0; i < domain.length; ++i) {
    const long t = domain.start + i;
    cx acc{};
    for (std::size_t k = 0; k < roots.size(); ++k) {
      cx poly{};
      double tp = 1.0;
      for (int j = 0; j < roots[k].mult; ++j, tp *= static_cast<double>(t))
        poly += poly_coeffs[k][static_cast<std::size_t>(j)] * tp;
      const cx zt = std::abs(std::abs(roots[k].z) - 1.0) < 1e-12
                        ? std::polar(1.0, std::arg(roots[k].z) * static_cast<double>(t))
                        : std::pow(roots[k].z, static_cast<double>(t));
      acc += poly * zt;
    }
    v[static_cast<std::size_t>(i)] = acc;
  }
  return Signal(domain.start, std::move(v));
}

namespace {

struct TrialOutcome {
  bool ok = false;
  double l2 = 0.0;
  double oracle_l2 = 0.0;
  std::vector<double> pointwise_sq;
};

RiskReport run_trials(const Signal& x, const Domain& eval, const DenoiseFn& fn,
                      const DenoiseFn* oracle_fn, double sigma, int trials,
                      std::uint64_t master_seed, int threads) {
  if (trials < 1) throw ConfigError("mc_risk: trials must be >= 1");
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));

#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (int trial = 0; trial < trials; ++trial) {
    auto& out = outcomes[static_cast<std::size_t>(trial)];
    try {
      NoiseModel nm{sigma, derive_trial_seed(master_seed, static_cast<std::uint64_t>(trial))};
      const Signal y = add(x, gen_noise(x.support(), nm));
      const Signal est = fn(y);
      double loss_sq = 0.0;
      out.pointwise_sq.resize(static_cast<std::size_t>(eval.length));
      for (long i = 0; i < eval.length; ++i) {
        const double e2 = std::norm(x[eval.start + i] - est[eval.start + i]);
        out.pointwise_sq[static_cast<std::size_t>(i)] = e2;
        loss_sq += e2;
      }
      out.l2 = std::sqrt(loss_sq);
      if (oracle_fn) {
        const Signal oest = (*oracle_fn)(y);
        double osq = 0.0;
        for (long i = 0; i < eval.length; ++i) osq += std::norm(x[eval.start + i] - oest[eval.start + i]);
        out.oracle_l2 = std::sqrt(osq);
      }
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;
    }
  }

  RiskReport rep;
  rep.trials = trials;
  rep.sigma = sigma;
  rep.master_seed = master_seed;
  rep.seed_derivation = kSeedDerivation;
  rep.eval_start = eval.start;
  rep.has_oracle = oracle_fn != nullptr;

  std::vector<double> excess;
  std::vector<double> ratios;
  std::vector<double> pointwise_acc(static_cast<std::size_t>(eval.length), 0.0);
  double sq_sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto& out = outcomes[static_cast<std::size_t>(trial)];
    if (!out.ok) {
      rep.failed_trials.push_back(trial);
      continue;
    }
    rep.per_trial_l2.push_back(out.l2);
    sq_sum += out.l2 * out.l2;
    for (std::size_t i = 0; i < pointwise_acc.size(); ++i) pointwise_acc[i] += out.pointwise_sq[i];
    if (oracle_fn) {
      rep.per_trial_oracle_l2.push_back(out.oracle_l2);
      excess.push_back(out.l2 - out.oracle_l2);
      if (out.oracle_l2 > 0.0) ratios.push_back(out.l2 / out.oracle_l2);
    }
  }
  const std::size_t ok_count = rep.per_trial_l2.size();
  if (ok_count == 0) throw DataError("mc_risk: every trial failed");

  rep.l2 = stats_of(rep.per_trial_l2);
  rep.normalized_mse =
      std::sqrt(sq_sum / static_cast<double>(ok_count) / static_cast<double>(eval.length));
  rep.pointwise_rmse.resize(pointwise_acc.size());
  for (std::size_t i = 0; i < pointwise_acc.size(); ++i)
    rep.pointwise_rmse[i] = std::sqrt(pointwise_acc[i] / static_cast<double>(ok_count));
  if (oracle_fn) {
    rep.oracle_l2 = stats_of(rep.per_trial_oracle_l2);
    rep.excess = stats_of(excess);
    rep.ratio = stats_of(ratios);
  }
  return rep;
}

DenoiseFn estimator_fn(const EstimatorConfig& cfg) {
  return [cfg](const Signal& y) {
    if (cfg.h) {
      Filter f = fit_predictive(y, cfg);
      return estimate(f, y, Domain::shifted(-cfg.n, cfg.n + 1));
    }
    Filter f = (cfg.mode == FitMode::penalized) ? fit_penalized(y, cfg) : fit_constrained(y, cfg);
    return estimate(f, y, Domain::symmetric(cfg.n));
  };
}

}  // namespace

RiskReport mc_risk_fn(const Signal& x, const Domain& eval, const DenoiseFn& fn, double sigma,
                      int trials, std::uint64_t master_seed, int threads) {
  return run_trials(x, eval, fn, nullptr, sigma, trials, master_seed, threads);
}

RiskReport mc_risk(const Signal& x, const EstimatorConfig& cfg, double sigma, int trials,
                   std::uint64_t master_seed, int threads) {
  const Domain eval = cfg.h ? Domain::shifted(-cfg.n, cfg.n + 1) : Domain::symmetric(cfg.n);
  RiskReport rep = run_trials(x, eval, estimator_fn(cfg), nullptr, sigma, trials, master_seed, threads);
  rep.config = cfg;
  return rep;
}

RiskReport oracle_comparison(const Signal& x, const SubspaceSpec& spec, const EstimatorConfig& cfg,
                             double sigma, int trials, std::uint64_t master_seed, int threads) {
  if (cfg.h) throw ConfigError("oracle_comparison: bilateral configurations only");
  // Candidate reproducing filters: the window-projector constructions and the
  // autoconvolution of the half-bandwidth one (the small-budget route). Keep
  // the feasible candidate using the least budget.
  std::vector<Filter> candidates;
  if (spec.dimension() <= cfg.m + 1) {
    candidates.push_back(interpolating_filter(spec, cfg.m));
    candidates.push_back(interpolating_filter_centered(spec, cfg.m));
  }
  if (spec.dimension() <= cfg.m / 2 + 1)
    candidates.push_back(square_oracle(interpolating_filter(spec, cfg.m / 2)));
  if (candidates.empty())
    throw ConfigError("oracle_comparison: subspace dimension exceeds the filter bandwidth");

  const double budget = cfg.rho_bar / std::sqrt(2.0 * cfg.m + 1.0);
  const Filter* oracle = nullptr;
  double least_need = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    const double need = cand.fourier_l1_at(cfg.m);
    if (need < least_need) least_need = need;
    if (need <= budget * (1.0 + 1e-9) && (!oracle || need < oracle->fourier_l1_at(cfg.m)))
      oracle = &cand;
  }
  if (!oracle) {
    const double suggested = least_need * std::sqrt(2.0 * cfg.m + 1.0);
    throw ConfigError("oracle_comparison: oracle filter violates the budget; increase rho_bar to "
                      "at least " +
                      std::to_string(suggested));
  }
  const Domain eval = Domain::symmetric(cfg.n);
  const Filter chosen = *oracle;
  DenoiseFn oracle_fn = [chosen, eval](const Signal& y) { return estimate(chosen, y, eval); };
  RiskReport rep = run_trials(x, eval, estimator_fn(cfg), &oracle_fn, sigma, trials, master_seed, threads);
  rep.config = cfg;
  return rep;
}

}  // namespace shiftdenoise
