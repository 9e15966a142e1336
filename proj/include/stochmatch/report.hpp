#pragma once

#include <string>

#include <json.hpp>

#include "stochmatch/harness.hpp"

namespace stochmatch {

nlohmann::json to_json(const VimParams& p);
nlohmann::json to_json(const ThresholdChoice& t);
nlohmann::json to_json(const CertificateSummary& s);
/// Timings are kept under "timings" so the rest is reproducible byte for byte.
nlohmann::json to_json(const ExperimentReport& r, bool include_timings = true);

/// Strict parse of an experiment config; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& c);

/// Flattens a JSON document into "key,value" lines (nested keys joined with
/// '.', array elements indexed). Strings are quoted when they contain commas.
std::string json_to_csv(const nlohmann::json& doc);

}  // namespace stochmatch
