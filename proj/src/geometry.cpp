#include "irsplan/geometry.hpp"

#include <numbers>
#include <numeric>
#include <sstream>

namespace irsplan {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}
}  // namespace

double CellConfig::density() const { return users / (std::numbers::pi * radius * radius); }

void CellConfig::validate() const {
  if (!(radius > 0.0)) throw DomainError("CellConfig: cell radius must be > 0");
  if (users < 1) throw DomainError("CellConfig: need at least one UE");
  if (!(near_ap_radius >= 1.0)) throw DomainError("CellConfig: near-AP IRS radius must be >= 1 m");
  if (near_ap_max < 0) throw DomainError("CellConfig: near-AP IRS limit must be >= 0");
  if (!(max_users_per_irs >= 1.0)) throw DomainError("CellConfig: per-IRS UE limit must be >= 1");
}

double Ring::sector_angle() const { return irs > 0 ? kTwoPi / irs : kTwoPi; }

int RingPlan::total_irs() const {
  return std::accumulate(rings.begin(), rings.end(), 0, [](int acc, const Ring& r) { return acc + r.irs; });
}

double RingPlan::ap_disc_radius() const { return rings.empty() ? outer_radius : rings.back().inner; }

RingPlan RingPlan::build(const CellConfig& cell, double outer_radius, const std::vector<double>& inner_radii,
                         const std::vector<int>& irs_counts) {
  if (inner_radii.size() != irs_counts.size()) throw DomainError("RingPlan::build: radii and counts differ in length");
  RingPlan plan;
  plan.outer_radius = outer_radius;
  double outer = outer_radius;
  for (std::size_t i = 0; i < inner_radii.size(); ++i) {
    Ring ring;
    ring.outer = outer;
    ring.inner = inner_radii[i];
    ring.irs = irs_counts[i];
    ring.irs_radius = (i == 0) ? cell.near_ap_radius : 0.5 * (ring.inner + ring.outer);
    plan.rings.push_back(ring);
    outer = ring.inner;
  }
  plan.power_ratios.assign(inner_radii.size() + 1, 0.0);
  return plan;
}

std::vector<Violation> validate_plan(const CellConfig& cell, const RingPlan& plan, int total_irs) {
  std::vector<Violation> out;
  const double tol = 1e-9;
  const double lambda = cell.density();

  if (plan.outer_radius > cell.radius + tol || plan.outer_radius < 0.0)
    out.push_back({"radius ordering", "R_in,0 outside [0, R_ex]", plan.outer_radius - cell.radius});

  double outer = plan.outer_radius;
  for (int i = 0; i < plan.ring_count(); ++i) {
    const Ring& ring = plan.rings[i];
    const std::string tag = "ring " + std::to_string(i + 1);
    if (std::abs(ring.outer - outer) > tol)
      out.push_back({"radius ordering", tag + " outer radius does not continue the previous ring",
                     std::abs(ring.outer - outer)});
    if (ring.inner > ring.outer + tol)
      out.push_back({"radius ordering", tag + " inner radius exceeds its outer radius", ring.inner - ring.outer});
    if (ring.inner < -tol) out.push_back({"radius ordering", tag + " inner radius is negative", -ring.inner});
    if (ring.irs < 0) out.push_back({"IRS count", tag + " has a negative IRS count", static_cast<double>(-ring.irs)});

    const double expected_l = (i == 0) ? cell.near_ap_radius : 0.5 * (ring.inner + ring.outer);
    if (ring.irs > 0 && std::abs(ring.irs_radius - expected_l) > 1e-6)
      out.push_back({"IRS circle radius", tag + " IRS circle radius " + fmt(ring.irs_radius) + " != " + fmt(expected_l),
                     std::abs(ring.irs_radius - expected_l)});

    const double ring_users = lambda * std::numbers::pi * (ring.outer * ring.outer - ring.inner * ring.inner);
    if (ring_users > tol) {
      if (ring.irs <= 0) {
        out.push_back({"users per IRS", tag + " has positive area but no IRS", ring_users});
      } else {
        const double per_irs = ring_users / ring.irs;
        if (per_irs > cell.max_users_per_irs + 1e-9)
          out.push_back({"users per IRS", tag + " averages " + fmt(per_irs) + " UEs per IRS",
                         per_irs - cell.max_users_per_irs});
      }
    }
    outer = ring.inner;
  }

  if (!plan.rings.empty() && plan.rings.front().irs > cell.near_ap_max)
    out.push_back({"near-AP IRS count", "M_1 exceeds the near-AP limit",
                   static_cast<double>(plan.rings.front().irs - cell.near_ap_max)});
  if (total_irs >= 0 && plan.total_irs() != total_irs)
    out.push_back({"IRS count", "IRS counts sum to " + std::to_string(plan.total_irs()) + " instead of " +
                                    std::to_string(total_irs),
                   static_cast<double>(std::abs(plan.total_irs() - total_irs))});

  if (plan.power_ratios.size() != plan.rings.size() + 1) {
    out.push_back({"power ratios", "expected one ratio per ring plus the AP-only region",
                   static_cast<double>(plan.power_ratios.size()) - static_cast<double>(plan.rings.size() + 1)});
  } else {
    double sum = 0.0;
    for (double rho : plan.power_ratios) {
      if (rho < 0.0) out.push_back({"power ratios", "negative power ratio", -rho});
      sum += rho;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      out.push_back({"power ratios", "power ratios sum to " + fmt(sum) + " != 1", std::abs(sum - 1.0)});
  }
  return out;
}

SectorAssignment sector_of(const Ring& ring, int ring_index, double azimuth) {
  const double span = ring.sector_angle();
  double az = std::fmod(azimuth, kTwoPi);
  if (az < 0.0) az += kTwoPi;
  int sector = static_cast<int>(az / span);
  sector = std::clamp(sector, 0, std::max(ring.irs, 1) - 1);
  return {ring_index, sector, (sector + 0.5) * span, span};
}

UeLocation locate_ue(const CellConfig& cell, const RingPlan& plan, double r, double azimuth) {
  if (!(r >= 0.0)) throw DomainError("locate_ue: r must be >= 0");
  if (r > cell.radius * (1.0 + 1e-12)) throw DomainError("locate_ue: UE outside the cell");
  UeLocation loc;
  loc.geometry.ap_ue = r;
  for (int i = 0; i < plan.ring_count(); ++i) {
    const Ring& ring = plan.rings[i];
    if (ring.empty()) continue;
    // Ring 1 closes at R_in,0; other rings hand their outer boundary to the
    // next ring out, and each inner boundary belongs to the ring itself.
    const bool inside = r >= ring.inner && (r < ring.outer || (i == 0 && r <= ring.outer));
    if (!inside) continue;
    const auto sector = sector_of(ring, i + 1, azimuth);
    double az = std::fmod(azimuth, kTwoPi);
    if (az < 0.0) az += kTwoPi;
    loc.assignment = sector;
    loc.geometry.ap_irs = ring.irs_radius;
    loc.geometry.irs_ue = irs_distance(r, ring.irs_radius, az - sector.irs_azimuth);
    return loc;
  }
  return loc;
}

double sector_area(const RingPlan& plan, int ring) {
  if (ring < 1 || ring > plan.ring_count()) throw DomainError("sector_area: ring index out of range");
  const Ring& rg = plan.rings[ring - 1];
  if (rg.irs <= 0) throw DomainError("sector_area: ring has no IRS");
  return std::numbers::pi * (rg.outer * rg.outer - rg.inner * rg.inner) / rg.irs;
}

}  // namespace irsplan
