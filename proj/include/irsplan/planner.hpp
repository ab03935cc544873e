// Placement optimizers: coverage range, exhaustive ring search and the
// fast ring construction heuristic.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsplan/channel.hpp"
#include "irsplan/geometry.hpp"
#include "irsplan/numerics.hpp"
#include "irsplan/powerctl.hpp"

namespace irsplan {

struct Scenario {
  RadioConfig radio;
  CellConfig cell;
  IrsSpec irs;
  double min_nop = 0.95;  // P_no target

  void validate() const;
};

// Quadrature used for planning. 8-point panels already resolve the sector
// integrals to ~1e-9; see the tests for the comparison with 32/64 points.
inline QuadratureOptions planning_quadrature() {
  QuadratureOptions q;
  q.points = 8;
  q.rel_tol = 1e-7;
  return q;
}

struct SearchGrid {
  double radius_step = 5.0;
  // The power split is solved in closed form for every candidate, so the
  // ratio grid is never enumerated; kept so configs can state it.
  double rho_step = 0.01;
  int max_rings = 3;
  bool search_outer_radius = false;  // also search R_in,0 < R_ex
  QuadratureOptions quadrature = planning_quadrature();

  void validate() const;
};

struct PlanResult {
  RingPlan plan;
  std::vector<RegionEnergyCoefficient> coefficients;  // AP-only first
  PowerAllocation allocation;
  double throughput = 0.0;
  std::string method;
};

// No configuration satisfies the ring-plan constraints.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> binding)
      : std::runtime_error(what), binding_(std::move(binding)) {}
  const std::vector<std::string>& binding() const noexcept { return binding_; }

 private:
  std::vector<std::string> binding_;
};

struct CoverageResult {
  double range = 0.0;       // r*, m
  bool unreachable = false;  // threshold already missed at r = l
};

// Largest r with p g_d(r) / W >= snr, closed form.
double coverage_range_direct(const RadioConfig& cfg, double power, double snr);

// With `irs_distance` set, the IRS sits on the AP-UE line at that distance
// and coverage uses E{Z^2}; found by bisection on [l, 10 r*_direct].
CoverageResult coverage_range(const RadioConfig& cfg, const IrsSpec& irs, double power, double snr,
                              std::optional<double> irs_distance, const Tolerance& tol = {});

// Region coefficients, equalized power split and ratios for a fixed plan.
PlanResult evaluate_plan(const Scenario& sc, RingPlan plan, std::string method,
                         const QuadratureOptions& opt = planning_quadrature());

// Exhaustive search over ring radii on the grid and integer IRS splits with
// exactly `rings` rings (some may be zero-width). `total_irs` >= 1.
PlanResult line_search(const Scenario& sc, int total_irs, int rings, const SearchGrid& grid = {});

// Same search with the ring coefficient table kept between calls. The table
// covers every IRS count up to `max_irs` and ring counts up to grid.max_rings.
class LineSearch {
 public:
  LineSearch(const Scenario& sc, int max_irs, const SearchGrid& grid = {});
  ~LineSearch();
  LineSearch(LineSearch&&) noexcept;
  LineSearch& operator=(LineSearch&&) noexcept;

  PlanResult solve(int total_irs, int rings) const;
  int max_irs() const noexcept;
  const SearchGrid& grid() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Ring construction heuristic; tries I = 2..max_rings and keeps the best.
PlanResult algorithm1(const Scenario& sc, int total_irs, int max_rings,
                      const QuadratureOptions& opt = planning_quadrature());

// Plan built by the heuristic for a fixed ring count (used by algorithm1).
RingPlan algorithm1_rings(const CellConfig& cell, int total_irs, int rings);

// Fraction of the cell area covered by IRS sectors.
double irs_area_fraction(const CellConfig& cell, const RingPlan& plan);

}  // namespace irsplan
