// Monte Carlo validation: random UE drops, exact fading draws and empirical
// non-outage statistics for a plan.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irsplan/planner.hpp"

namespace irsplan {

enum class ElementDraws { exact, gaussian_surrogate };

struct McConfig {
  int n_topologies = 100;
  std::int64_t n_fading = 10000;
  std::uint64_t seed = 1;
  ElementDraws element_draws = ElementDraws::exact;
  // Exact mode draws the IRS sum S from a pool of this many independent
  // realizations; each UE reads consecutive entries from a random offset.
  std::int64_t pool_size = 1 << 17;
  bool parallel = true;  // OpenMP kernels; the serial ones give identical results

  void validate() const;
};

struct UeSample {
  double r = 0.0;
  double azimuth = 0.0;
  int region = 0;   // 0 = AP only, i = ring i
  int sector = -1;
  bool overflow = false;  // in an IRS sector but beyond the n_t nearest
  LinkGeometry geometry;
  double power = 0.0;     // W
};

struct Topology {
  std::uint64_t index = 0;
  std::vector<UeSample> ues;
  int overflow = 0;
  int max_sector_load = 0;  // IRS-served UEs in the fullest sector
  double frame_energy = 0.0;  // sum of p_k t0, J
};

// AP-only UEs (and overflow UEs) get CIPC at gamma = eta0* / ln(1/P_no); IRS
// UEs get the power meeting P_no under the Gamma approximation at eta0*.
Topology sample_topology(const Scenario& sc, const PlanResult& plan, std::uint64_t seed, std::uint64_t index);

// Pool of unit double-Rayleigh sums for `elements` elements.
std::vector<double> make_unit_sum_pool(std::uint64_t seed, int elements, std::int64_t size, bool parallel);

struct Stratum {
  std::string label;
  std::int64_t trials = 0;
  std::int64_t successes = 0;

  double nop() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
  // 95% normal-approximation half-width.
  double half_width() const;
  void add(std::int64_t t, std::int64_t s) {
    trials += t;
    successes += s;
  }
};

struct McEstimate {
  std::vector<Stratum> regions;  // AP-only (including overflow UEs), then rings
  std::vector<Stratum> deciles;  // equal-area radial deciles
  Stratum overflow{"overflow"};
  Stratum all{"all"};
  double rate = 0.0;             // log2(1 + eta0)
  int binding_region = 0;        // region with the lowest empirical NOP
  double min_throughput = 0.0;   // rate * lowest region NOP
  double half_width = 0.0;       // rate * half-width of that region
  double mean_frame_energy = 0.0;
  double energy_half_width = 0.0;
  int topologies = 0;
};

// Empirical non-outage at SNR threshold eta0 over the given topologies.
// `pool` is ignored in surrogate mode.
McEstimate empirical_nop(std::span<const Topology> topologies, const Scenario& sc, int rings, double eta0,
                         const McConfig& mc, std::span<const double> pool);

struct ValidationReport {
  ThroughputReport analytical;
  McEstimate mc;
  double throughput_delta = 0.0;  // MC minus analytical
  bool within_interval = false;   // analytical inside the MC 95% interval
  std::vector<double> region_nop_delta;  // MC minus P_no per region
  double energy_ratio = 0.0;      // mean frame energy / E_total
  std::int64_t overflow_ues = 0;
  std::string overflow_policy = "CIPC at the AP-only mean SNR";
};

ValidationReport validate_plan_mc(const Scenario& sc, const PlanResult& plan, const McConfig& mc);
ValidationReport validate_plan_mc(const Scenario& sc, const PlanResult& plan, const McConfig& mc,
                                  std::span<const double> pool);

// Key for position draws, distinct from the fading streams under one seed.
inline std::uint64_t position_key(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ull; }

}  // namespace irsplan
