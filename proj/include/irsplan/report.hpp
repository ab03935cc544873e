// JSON and CSV artifacts. Every file embeds the resolved config; nothing
// time-dependent goes into them.
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "irsplan/config.hpp"

namespace irsplan {

inline constexpr int kSchemaVersion = 1;

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);

// "# key=value" lines for the head of a CSV file.
std::string csv_preamble(const ExperimentConfig& cfg, const std::string& kind);

nlohmann::ordered_json throughput_json(const ThroughputReport& rep);

struct Baselines {
  ThroughputReport equal_power;
  ThroughputReport cipc;
};
Baselines ap_baselines(const Scenario& sc);

nlohmann::ordered_json plan_json(const ExperimentConfig& cfg, const PlanResult& res, const Baselines& base);
std::string ring_table_csv(const ExperimentConfig& cfg, const PlanResult& res);

// Rebuilds and re-evaluates a plan written by plan_json. Throws ConfigError
// when the stored config disagrees with `cfg` on anything the plan depends on.
PlanResult plan_from_json(const nlohmann::json& doc, const ExperimentConfig& cfg);

nlohmann::ordered_json validation_json(const ExperimentConfig& cfg, const ValidationReport& rep);

void write_file(const std::string& path, const std::string& content);

}  // namespace irsplan
