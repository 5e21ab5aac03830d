#include "shiftdenoise/io.hpp"

#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "shiftdenoise/errors.hpp"

namespace shiftdenoise::io {

using nlohmann::json;

namespace {

json complex_to_json(const cx& v) { return json::array({v.real(), v.imag()}); }

cx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("expected [re, im] pair");
  return cx{j[0].get<double>(), j[1].get<double>()};
}

json cvec_to_json(const cvec& v) {
  json arr = json::array();
  for (const auto& e : v) arr.push_back(complex_to_json(e));
  return arr;
}

cvec cvec_from_json(const json& j) {
  cvec out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json stats_to_json(const RiskStats& s) {
  return json{{"mean", s.mean}, {"median", s.median}, {"q10", s.q10}, {"q90", s.q90}};
}

}  // namespace

Signal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open signal file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
  };
  if (strip(line) != "t,re,im")
    throw DataError(path + ":1: expected header 't,re,im'");

  std::map<long, cx> entries;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string ts, res, ims;
    if (!std::getline(ss, ts, ',') || !std::getline(ss, res, ',') || !std::getline(ss, ims))
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 't,re,im' row");
    long t;
    double re, im;
    try {
      std::size_t pos = 0;
      t = std::stol(ts, &pos);
      if (pos != ts.size()) throw std::invalid_argument(ts);
      re = std::stod(res, &pos);
      if (pos != res.size()) throw std::invalid_argument(res);
      im = std::stod(ims, &pos);
      if (pos != ims.size()) throw std::invalid_argument(ims);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
    }
    if (entries.count(t))
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate index " +
                      std::to_string(t));
    entries[t] = cx{re, im};
  }
  if (entries.empty()) throw DataError(path + ": no samples");
  const long start = entries.begin()->first;
  const long stop = entries.rbegin()->first;
  cvec v(static_cast<std::size_t>(stop - start + 1), cx{});
  for (const auto& [t, val] : entries) v[static_cast<std::size_t>(t - start)] = val;
  return Signal(start, std::move(v));
}

void write_signal_csv(const std::string& path, const Signal& x) {
  std::ostringstream out;
  out << "t,re,im\n";
  out.precision(17);
  for (long t = x.start(); t <= x.stop(); ++t) {
    const cx v = x[t];
    out << t << ',' << v.real() << ',' << v.imag() << '\n';
  }
  atomic_write_text(path, out.str());
}

json to_json(const EstimatorConfig& cfg) {
  json j{{"m", cfg.m},
         {"n", cfg.n},
         {"mode", cfg.mode == FitMode::penalized ? "penalized" : "constrained"},
         {"rho_bar", cfg.rho_bar},
         {"lambda", cfg.lambda},
         {"sigma", cfg.sigma},
         {"solver", json{{"max_iters", cfg.solver.max_iters}, {"tol", cfg.solver.tol}}}};
  if (cfg.h) j["h"] = *cfg.h;
  return j;
}

EstimatorConfig config_from_json(const json& j) {
  EstimatorConfig cfg;
  try {
    cfg.m = j.at("m").get<long>();
    cfg.n = j.at("n").get<long>();
    if (j.contains("h")) cfg.h = j.at("h").get<long>();
    const std::string mode = j.value("mode", "constrained");
    if (mode == "constrained")
      cfg.mode = FitMode::constrained;
    else if (mode == "penalized")
      cfg.mode = FitMode::penalized;
    else
      throw ConfigError("config: unknown mode '" + mode + "'");
    cfg.rho_bar = j.value("rho_bar", 1.0);
    cfg.lambda = j.value("lambda", 0.0);
    cfg.sigma = j.value("sigma", 1.0);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      cfg.solver.max_iters = s.value("max_iters", cfg.solver.max_iters);
      cfg.solver.tol = s.value("tol", cfg.solver.tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.m < 1) throw ConfigError("config: m must be >= 1");
  if (cfg.n < 0) throw ConfigError("config: n must be >= 0");
  if (cfg.mode == FitMode::constrained && cfg.rho_bar < 1.0)
    throw ConfigError("config: constrained mode requires rho_bar >= 1");
  if (cfg.mode == FitMode::penalized && cfg.sigma <= 0.0)
    throw ConfigError("config: penalized mode requires sigma > 0");
  if (cfg.h && *cfg.h < 0) throw ConfigError("config: h must be >= 0");
  return cfg;
}

EstimatorConfig read_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(const Filter& f) {
  json j{{"class", f.cls == FilterClass::bilateral ? "bilateral" : "shifted"},
         {"m", f.m},
         {"shift", f.h},
         {"coefficients", cvec_to_json(f.coeffs)},
         {"converged", f.converged}};
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

Filter filter_from_json(const json& j) {
  Filter f;
  try {
    const std::string cls = j.at("class").get<std::string>();
    if (cls == "bilateral")
      f.cls = FilterClass::bilateral;
    else if (cls == "shifted")
      f.cls = FilterClass::shifted;
    else
      throw DataError("filter: unknown class '" + cls + "'");
    f.m = j.at("m").get<long>();
    f.h = j.value("shift", 0L);
    f.coeffs = cvec_from_json(j.at("coefficients"));
    f.converged = j.value("converged", true);
    f.note = j.value("note", "");
  } catch (const json::exception& e) {
    throw DataError(std::string("filter: ") + e.what());
  }
  const std::size_t expected =
      f.cls == FilterClass::bilateral ? static_cast<std::size_t>(2 * f.m + 1)
                                      : static_cast<std::size_t>(f.m + 1);
  if (f.coeffs.size() != expected)
    throw DataError("filter: coefficient count does not match the class support");
  return f;
}

Filter read_filter(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return filter_from_json(j);
}

void write_filter(const std::string& path, const Filter& f) {
  atomic_write_text(path, to_json(f).dump(2) + "\n");
}

json to_json(const SubspaceSpec& spec) {
  if (spec.unit_modulus()) {
    json modes = json::array();
    for (const auto& mo : spec.modes()) modes.push_back(json{{"omega", mo.omega}, {"mult", mo.mult}});
    return json{{"modes", modes}};
  }
  return json{{"poly", cvec_to_json(spec.poly())}};
}

SubspaceSpec spec_from_json(const json& j) {
  try {
    if (j.contains("modes")) {
      std::vector<Mode> modes;
      for (const auto& e : j.at("modes"))
        modes.push_back({e.at("omega").get<double>(), e.value("mult", 1)});
      return SubspaceSpec::from_modes(std::move(modes));
    }
    if (j.contains("poly")) return SubspaceSpec::from_poly(cvec_from_json(j.at("poly")));
  } catch (const json::exception& e) {
    throw DataError(std::string("spec: ") + e.what());
  }
  throw DataError("spec: expected 'modes' or 'poly'");
}

SubspaceSpec read_spec(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return spec_from_json(j);
}

json to_json(const RiskReport& rep, bool include_per_trial) {
  json j{{"trials", rep.trials},
         {"sigma", rep.sigma},
         {"failed_trials", rep.failed_trials},
         {"l2", stats_to_json(rep.l2)},
         {"normalized_mse", rep.normalized_mse},
         {"eval_start", rep.eval_start},
         {"pointwise_rmse", rep.pointwise_rmse},
         {"master_seed", rep.master_seed},
         {"seed_derivation", rep.seed_derivation}};
  if (rep.config) j["config"] = to_json(*rep.config);
  if (rep.has_oracle) {
    j["oracle_l2"] = stats_to_json(rep.oracle_l2);
    j["excess"] = stats_to_json(rep.excess);
    j["ratio"] = stats_to_json(rep.ratio);
  }
  if (include_per_trial) {
    j["per_trial_l2"] = rep.per_trial_l2;
    if (rep.has_oracle) j["per_trial_oracle_l2"] = rep.per_trial_oracle_l2;
  }
  return j;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw DataError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw DataError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shiftdenoise::io
