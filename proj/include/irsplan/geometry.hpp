// Cell layout: ring partition, annulus sectors, IRS positions and UE
// association.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "irsplan/channel.hpp"

namespace irsplan {

struct CellConfig {
  double radius = 250.0;           // R_ex
  int users = 500;                 // K
  double near_ap_radius = 10.0;    // L_min
  int near_ap_max = 10;            // M_1,max
  double max_users_per_irs = 10.0; // K_IRS bound on the average served count

  double density() const;  // K / (pi R_ex^2)
  void validate() const;
};

// One ring region S_i: UEs at AP distance in [inner, outer] served by
// `irs` surfaces placed on a circle of radius `irs_radius`.
struct Ring {
  double outer = 0.0;
  double inner = 0.0;
  int irs = 0;
  double irs_radius = 0.0;

  bool empty() const { return irs == 0 || inner >= outer; }
  double sector_angle() const;  // 2 pi / irs
};

struct RingPlan {
  double outer_radius = 0.0;        // R_in,0
  std::vector<Ring> rings;          // ring 1 first (outermost)
  std::vector<double> power_ratios; // rho_0 (AP-only) then one per ring

  int ring_count() const { return static_cast<int>(rings.size()); }
  int total_irs() const;
  double ap_disc_radius() const;    // R_in,I

  // Rings from descending inner radii and IRS counts. The first ring sits on
  // the near-AP circle, later rings midway between their radii.
  static RingPlan build(const CellConfig& cell, double outer_radius, const std::vector<double>& inner_radii,
                        const std::vector<int>& irs_counts);
};

struct Violation {
  std::string constraint;
  std::string detail;
  double slack = 0.0;  // amount by which the constraint is exceeded
};

// Empty result means the plan satisfies every ring-plan constraint for the
// given total IRS count (pass a negative total to skip that check).
std::vector<Violation> validate_plan(const CellConfig& cell, const RingPlan& plan, int total_irs = -1);

struct SectorAssignment {
  int ring = 0;          // 1-based ring index
  int sector = 0;        // 0-based within the ring
  double irs_azimuth = 0.0;
  double span = 0.0;     // 2 pi / M_i
};

struct UeLocation {
  // AP-only UEs (inner disc or outside R_in,0) carry no assignment.
  std::optional<SectorAssignment> assignment;
  LinkGeometry geometry;  // ap_irs and irs_ue are zero for AP-only UEs
  bool ap_only() const { return !assignment.has_value(); }
};

UeLocation locate_ue(const CellConfig& cell, const RingPlan& plan, double r, double azimuth);

// Sector of `ring` containing `azimuth`; sectors start at azimuth 0.
SectorAssignment sector_of(const Ring& ring, int ring_index, double azimuth);

// pi (R_in,i-1^2 - R_in,i^2) / M_i for the 1-based ring index.
double sector_area(const RingPlan& plan, int ring);

// Horizontal UE-IRS distance by the law of cosines.
inline double irs_distance(double r, double irs_radius, double offset) {
  const double d2 = r * r + irs_radius * irs_radius - 2.0 * r * irs_radius * std::cos(offset);
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace irsplan
