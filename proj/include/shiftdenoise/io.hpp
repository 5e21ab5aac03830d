#pragma once

#include <string>

#include <json.hpp>

#include "shiftdenoise/estimators.hpp"
#include "shiftdenoise/harness.hpp"
#include "shiftdenoise/oracles.hpp"
#include "shiftdenoise/signal.hpp"

namespace shiftdenoise::io {

/// Signal CSV: header "t,re,im", one row per support index, "." decimals.
/// Duplicate indices are rejected; gaps read as zero.
Signal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const Signal& x);

nlohmann::json to_json(const EstimatorConfig& cfg);
EstimatorConfig config_from_json(const nlohmann::json& j);
EstimatorConfig read_config(const std::string& path);

nlohmann::json to_json(const Filter& f);
Filter filter_from_json(const nlohmann::json& j);
Filter read_filter(const std::string& path);
void write_filter(const std::string& path, const Filter& f);

nlohmann::json to_json(const SubspaceSpec& spec);
SubspaceSpec spec_from_json(const nlohmann::json& j);
SubspaceSpec read_spec(const std::string& path);

nlohmann::json to_json(const RiskReport& rep, bool include_per_trial);

/// Write via a temp file in the destination directory, then rename.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

}  // namespace shiftdenoise::io
