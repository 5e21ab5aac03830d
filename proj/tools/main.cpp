#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "shiftdenoise/errors.hpp"
#include "shiftdenoise/estimators.hpp"
#include "shiftdenoise/harness.hpp"
#include "shiftdenoise/io.hpp"
#include "shiftdenoise/oracles.hpp"

using namespace shiftdenoise;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConvergence = 4;

int default_threads() {
  if (const char* env = std::getenv("SHIFTDENOISE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default
}

struct FitArgs {
  std::string input, config, output;
};

int run_fit(const FitArgs& args) {
  const EstimatorConfig cfg = io::read_config(args.config);
  const Signal y = io::read_signal_csv(args.input);
  Filter f;
  if (cfg.h)
    f = fit_predictive(y, cfg);
  else if (cfg.mode == FitMode::penalized)
    f = fit_penalized(y, cfg);
  else
    f = fit_constrained(y, cfg);
  io::write_filter(args.output, f);
  if (!f.converged) {
    std::cerr << "warning: solver did not reach the requested tolerance; filter written anyway\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

struct DenoiseArgs {
  std::string input, filter, config, output, mode = "fit";
  long s = 0;
  int threads = default_threads();
};

int run_denoise(const DenoiseArgs& args) {
  const Signal y = io::read_signal_csv(args.input);
  Signal out;
  bool converged = true;

  if (args.mode == "filter") {
    if (args.filter.empty()) throw DataError("denoise --mode filter requires --filter");
    const Filter f = io::read_filter(args.filter);
    const long lo = y.start() - f.support_start();
    const long hi = y.stop() - f.support_stop();
    if (hi < lo) throw DataError("denoise: input too short for the filter support");
    out = estimate(f, y, Domain::shifted(lo, hi - lo + 1));
  } else if (args.mode == "fit") {
    if (args.config.empty()) throw DataError("denoise --mode fit requires --config");
    const EstimatorConfig cfg = io::read_config(args.config);
    Filter f;
    if (cfg.h) {
      f = fit_predictive(y, cfg);
      out = estimate(f, y, Domain::shifted(-cfg.n, cfg.n + 1));
    } else {
      f = (cfg.mode == FitMode::penalized) ? fit_penalized(y, cfg) : fit_constrained(y, cfg);
      out = estimate(f, y, Domain::symmetric(cfg.n));
    }
    converged = f.converged;
  } else if (args.mode == "blockwise") {
    if (args.config.empty()) throw DataError("denoise --mode blockwise requires --config");
    const EstimatorConfig cfg = io::read_config(args.config);
    out = blockwise_denoise(y, cfg);
  } else if (args.mode == "composite") {
    if (args.s < 1) throw ConfigError("denoise --mode composite requires --s >= 1");
    if (y.start() > 0 || y.stop() < 0)
      throw DataError("denoise --mode composite expects observations around the origin");
    const long N = std::min(-y.start(), y.stop());
    out = denoise_full_composite(y, N, args.s);
  } else {
    throw ConfigError("denoise: unknown --mode '" + args.mode + "'");
  }

  io::write_signal_csv(args.output, out);
  if (!converged) {
    std::cerr << "warning: solver did not reach the requested tolerance\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

struct OracleArgs {
  std::string spec, kind = "interp", output, filter;
  long m = 0;
};

int run_oracle(const OracleArgs& args) {
  Filter f;
  if (args.kind == "square") {
    if (args.filter.empty()) throw DataError("oracle --kind square requires --filter");
    f = square_oracle(io::read_filter(args.filter));
  } else {
    const SubspaceSpec spec = io::read_spec(args.spec);
    if (args.m < 1) throw ConfigError("oracle: --m must be >= 1");
    if (args.kind == "interp") {
      f = interpolating_filter(spec, args.m);
    } else if (args.kind == "separated") {
      std::vector<double> omegas;
      for (const auto& mo : spec.modes()) {
        if (mo.mult != 1) throw ConfigError("oracle --kind separated requires simple frequencies");
        omegas.push_back(mo.omega);
      }
      if (omegas.size() > 1) {
        const double sep = min_frequency_separation(omegas);
        const double threshold = 4.0 * std::numbers::pi / (args.m + 1.0);
        if (sep < threshold)
          std::cerr << "warning: frequency separation " << sep << " is below " << threshold
                    << "; the norm guarantee does not apply\n";
      }
      f = predictive_filter_separated(omegas, args.m);
    } else if (args.kind == "unitroots") {
      f = predictive_filter_unit_roots(spec, args.m);
    } else {
      throw ConfigError("oracle: unknown --kind '" + args.kind + "'");
    }
  }
  io::write_filter(args.output, f);
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario, output, csv;
  int threads = default_threads();
};

struct Generated {
  Signal x;
  std::optional<SubspaceSpec> spec;
};

Generated build_signal(const json& gen) {
  const std::string kind = gen.value("kind", "harmonic");
  if (kind == "harmonic") {
    const int s = gen.value("s", 1);
    const long n = gen.at("n").get<long>();
    const std::uint64_t seed = gen.value("seed", 0ull);
    auto [x, spec] = gen_harmonic(s, Domain::symmetric(n), seed);
    return {std::move(x), std::move(spec)};
  }
  if (kind == "constant") {
    const long n = gen.at("n").get<long>();
    cx value{1.0, 0.0};
    if (gen.contains("value"))
      value = cx{gen["value"][0].get<double>(), gen["value"][1].get<double>()};
    cvec v(static_cast<std::size_t>(2 * n + 1), value);
    return {Signal(-n, std::move(v)), SubspaceSpec::from_modes({{0.0, 1}})};
  }
  if (kind == "generalized") {
    const SubspaceSpec spec = io::spec_from_json(gen.at("spec"));
    const long n = gen.at("n").get<long>();
    std::vector<cvec> coeffs;
    for (const auto& row : gen.at("coeffs")) {
      cvec c;
      for (const auto& e : row) c.push_back(cx{e[0].get<double>(), e[1].get<double>()});
      coeffs.push_back(std::move(c));
    }
    return {gen_generalized_harmonic(spec, coeffs, Domain::symmetric(n)), spec};
  }
  if (kind == "csv") return {io::read_signal_csv(gen.at("path").get<std::string>()), std::nullopt};
  throw ConfigError("scenario: unknown generator kind '" + kind + "'");
}

int run_simulate(const SimulateArgs& args) {
  json scenario;
  try {
    scenario = json::parse(io::read_text(args.scenario));
  } catch (const json::exception& e) {
    throw ConfigError(args.scenario + ": " + e.what());
  }

  const Generated gen = build_signal(scenario.at("generator"));
  const EstimatorConfig cfg = io::config_from_json(scenario.at("estimator"));
  const int trials = scenario.value("trials", 100);
  const std::uint64_t master_seed = scenario.value("master_seed", 0ull);
  const bool per_trial = scenario.value("per_trial", false);
  const bool with_oracle = scenario.value("oracle", false);

  std::vector<double> sigmas;
  if (scenario.contains("sigma_grid"))
    for (const auto& s : scenario["sigma_grid"]) sigmas.push_back(s.get<double>());
  else
    sigmas.push_back(scenario.value("sigma", 1.0));
  if (sigmas.empty()) throw ConfigError("scenario: empty sigma grid");

  json results = json::array();
  std::ostringstream csv;
  csv << "sigma,trial,l2,oracle_l2\n";
  for (double sigma : sigmas) {
    RiskReport rep;
    if (with_oracle) {
      if (!gen.spec) throw ConfigError("scenario: oracle comparison needs a generator with a spec");
      rep = oracle_comparison(gen.x, *gen.spec, cfg, sigma, trials, master_seed, args.threads);
    } else {
      rep = mc_risk(gen.x, cfg, sigma, trials, master_seed, args.threads);
    }
    results.push_back(json{{"sigma", sigma}, {"report", io::to_json(rep, per_trial)}});
    for (std::size_t i = 0; i < rep.per_trial_l2.size(); ++i) {
      csv << sigma << ',' << i << ',' << rep.per_trial_l2[i] << ',';
      if (rep.has_oracle) csv << rep.per_trial_oracle_l2[i];
      csv << '\n';
    }
  }

  json out{{"scenario", scenario}, {"results", results}};
  io::atomic_write_text(args.output, out.dump(2) + "\n");
  if (!args.csv.empty()) io::atomic_write_text(args.csv, csv.str());
  return kExitOk;
}

struct ReportArgs {
  std::string input, output;
};

int run_report(const ReportArgs& args) {
  json rep;
  try {
    rep = json::parse(io::read_text(args.input));
  } catch (const json::exception& e) {
    throw DataError(args.input + ": " + e.what());
  }
  std::ostringstream csv;
  csv << "sigma,mean_l2,median_l2,q10_l2,q90_l2,normalized_mse,oracle_median_l2,excess_median\n";
  try {
    for (const auto& row : rep.at("results")) {
      const auto& r = row.at("report");
      csv << row.at("sigma").get<double>() << ',' << r.at("l2").at("mean").get<double>() << ','
          << r.at("l2").at("median").get<double>() << ',' << r.at("l2").at("q10").get<double>()
          << ',' << r.at("l2").at("q90").get<double>() << ','
          << r.at("normalized_mse").get<double>() << ',';
      if (r.contains("oracle_l2"))
        csv << r.at("oracle_l2").at("median").get<double>() << ','
            << r.at("excess").at("median").get<double>();
      else
        csv << ',';
      csv << '\n';
    }
  } catch (const json::exception& e) {
    throw DataError(args.input + ": not a simulation report: " + e.what());
  }
  io::atomic_write_text(args.output, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive convolution-type least-squares denoising"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an adaptive filter to observations");
  fit_cmd->add_option("--input", fit_args.input, "Signal CSV (t,re,im)")->required();
  fit_cmd->add_option("--config", fit_args.config, "Estimator config JSON")->required();
  fit_cmd->add_option("--output", fit_args.output, "Filter JSON destination")->required();

  DenoiseArgs den_args;
  auto* den_cmd = app.add_subcommand("denoise", "Estimate the signal from observations");
  den_cmd->add_option("--input", den_args.input, "Signal CSV (t,re,im)")->required();
  den_cmd->add_option("--mode", den_args.mode, "filter | fit | blockwise | composite");
  den_cmd->add_option("--filter", den_args.filter, "Filter JSON (mode=filter)");
  den_cmd->add_option("--config", den_args.config, "Estimator config JSON (mode=fit|blockwise)");
  den_cmd->add_option("--s", den_args.s, "Assumed mode count (mode=composite)");
  den_cmd->add_option("--threads", den_args.threads, "Worker threads (0 = library default)");
  den_cmd->add_option("--output", den_args.output, "Output CSV destination")->required();

  OracleArgs or_args;
  auto* or_cmd = app.add_subcommand("oracle", "Construct reproducing filters from a subspace");
  or_cmd->add_option("--spec", or_args.spec, "Subspace JSON (modes or poly)");
  or_cmd->add_option("--kind", or_args.kind, "interp | separated | unitroots | square");
  or_cmd->add_option("--m", or_args.m, "Filter bandwidth");
  or_cmd->add_option("--filter", or_args.filter, "Input filter JSON (kind=square)");
  or_cmd->add_option("--output", or_args.output, "Filter JSON destination")->required();

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  sim_cmd->add_option("--scenario", sim_args.scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--output", sim_args.output, "Report JSON destination")->required();
  sim_cmd->add_option("--csv", sim_args.csv, "Optional per-trial CSV dump");
  sim_cmd->add_option("--threads", sim_args.threads, "Worker threads (0 = library default)");

  ReportArgs rep_args;
  auto* rep_cmd = app.add_subcommand("report", "Extract plot-ready CSV from a report");
  rep_cmd->add_option("--input", rep_args.input, "Report JSON")->required();
  rep_cmd->add_option("--output", rep_args.output, "CSV destination")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);
    if (den_cmd->parsed()) return run_denoise(den_args);
    if (or_cmd->parsed()) return run_oracle(or_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (rep_cmd->parsed()) return run_report(rep_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
