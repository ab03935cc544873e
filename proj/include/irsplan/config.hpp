// Experiment configuration: YAML file plus dotted-key overrides, with unit
// suffixes converted to linear SI at load time.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsplan/planner.hpp"
#include "irsplan/simulation.hpp"

namespace irsplan {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoverageSweep {
  double power = 0.01;          // W (10 dBm)
  double snr_threshold = 10.0;  // linear (10 dB)
  double l_start = 0.0;
  double l_stop = 560.0;
  double l_step = 5.0;
};

struct PlanRequest {
  std::string method = "line-search";  // line-search | algorithm1
  int irs_count = 100;
  int rings = 3;       // line search
  int max_rings = 10;  // algorithm1
};

struct SweepRequest {
  std::vector<int> irs_counts{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<std::string> methods{"ap-equal-power", "ap-cipc", "line-search", "algorithm1", "irs-equal-power",
                                   "irs-mean-cipc"};
  std::string benchmark_placement = "line-search";  // plan used by the irs-* benchmarks
};

struct ExperimentConfig {
  Scenario scenario;
  OutageSpec outage;
  SearchGrid grid;
  McConfig mc;
  CoverageSweep coverage;
  PlanRequest plan;
  SweepRequest sweep;
  BenchmarkGrid benchmark;

  void validate() const;
};

// Loads `path` (empty for defaults only) and applies `key=value` overrides in
// order. Unknown keys and malformed values raise ConfigError naming the key
// and, for file entries, the line.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Every resolved field as key -> printable value, sorted by key. Linear SI
// units throughout.
std::map<std::string, std::string> resolved_entries(const ExperimentConfig& cfg);

// "<number> <unit>" or a bare number in SI. Supported units: dB, dBm, dBm/Hz,
// W, mW, W/Hz, J, mJ, Hz, kHz, MHz, GHz, s, ms, us, m, km.
double parse_quantity(const std::string& text);

}  // namespace irsplan
