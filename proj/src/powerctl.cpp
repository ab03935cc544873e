#include "irsplan/powerctl.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace irsplan {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_p_no(double p_no, const char* who) {
  if (!(p_no > 0.0 && p_no < 1.0)) throw DomainError(std::string(who) + ": p_no must be in (0, 1)");
}

// Largest AP distance served by the AP alone, or -1 when the AP-only region is empty.
double ap_only_edge(const CellConfig& cell, const RingPlan& plan) {
  if (plan.outer_radius < cell.radius) return cell.radius;
  const double inner = plan.ap_disc_radius();
  return inner > 0.0 ? inner : -1.0;
}

// Area integral of 1/g_d over the AP-only region.
double ap_inverse_gain_area(const RadioConfig& cfg, const CellConfig& cell, const RingPlan& plan) {
  const double f = f0_integral(cfg, plan.ap_disc_radius()) + f0_integral(cfg, cell.radius) -
                   f0_integral(cfg, plan.outer_radius);
  return kTwoPi * f / cfg.ref_gain();
}

template <class Fn>
void for_each_grid_point(const Ring& ring, const BenchmarkGrid& grid, Fn&& fn) {
  const int nr = std::max(grid.radial, 2);
  const int na = std::max(grid.angular, 2);
  const double half = 0.5 * ring.sector_angle();
  for (int a = 0; a < nr; ++a) {
    const double r = ring.inner + (ring.outer - ring.inner) * a / (nr - 1);
    for (int b = 0; b < na; ++b) fn(r, half * b / (na - 1));
  }
}

Z2Moments moments_at(const RadioConfig& cfg, const IrsSpec& irs, double irs_radius, double r, double offset) {
  const double a0 = cfg.ref_gain();
  const double n0 = cfg.pathloss_exponent;
  const double dh = cfg.ap_height - cfg.irs_height;
  const double d = irs_distance(r, irs_radius, offset);
  return z2_moments(irs.elements, pathloss_gain(a0, n0, irs_radius * irs_radius + dh * dh),
                    pathloss_gain(a0, n0, d * d + cfg.irs_height * cfg.irs_height),
                    pathloss_gain(a0, n0, r * r + cfg.ap_height * cfg.ap_height));
}

ThroughputReport finish(std::string scheme, double p_no, std::vector<RegionThroughput> regions,
                        const std::vector<double>& worst_snr) {
  ThroughputReport rep;
  rep.scheme = std::move(scheme);
  rep.min_nop = p_no;
  double eta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (std::isfinite(worst_snr[i])) {
      regions[i].throughput = p_no * std::log2(1.0 + worst_snr[i]);
      eta = std::min(eta, worst_snr[i]);
    }
  }
  rep.snr_threshold = std::isfinite(eta) ? eta : 0.0;
  rep.rate = std::log2(1.0 + rep.snr_threshold);
  rep.throughput = p_no * rep.rate;
  rep.regions = std::move(regions);
  return rep;
}
}  // namespace

double cipc_power(const RadioConfig& cfg, double snr, double r) {
  if (!(snr > 0.0)) throw DomainError("cipc_power: SNR must be > 0");
  return snr * cfg.noise_power() / mean_gain_direct(cfg, r);
}

double f0_integral(const RadioConfig& cfg, double radius) {
  if (!(radius >= 0.0)) throw DomainError("f0_integral: radius must be >= 0");
  const double e = 0.5 * cfg.pathloss_exponent + 1.0;
  const double h2 = cfg.ap_height * cfg.ap_height;
  return (std::pow(radius * radius + h2, e) - std::pow(h2, e)) / (2.0 * e);
}

RegionEnergyCoefficient ap_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, double p_no,
                                              double inner, double outer) {
  check_p_no(p_no, "ap_region_coefficient");
  if (!(inner >= 0.0 && inner <= outer + 1e-9 && outer <= cell.radius + 1e-9))
    throw DomainError("ap_region_coefficient: need 0 <= inner <= outer <= R_ex");
  const double f = f0_integral(cfg, inner) + f0_integral(cfg, cell.radius) - f0_integral(cfg, std::min(outer, cell.radius));
  const double c = kTwoPi * cell.density() * cfg.noise_power() * cfg.slot_s() * f / (cfg.ref_gain() * std::log(1.0 / p_no));
  return {0, std::max(c, 0.0)};
}

RegionEnergyCoefficient irs_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                               const RingPlan& plan, int ring, const ScaledGammaQuantile& kappa,
                                               const QuadratureOptions& opt) {
  if (ring < 1 || ring > plan.ring_count()) throw DomainError("irs_region_coefficient: ring index out of range");
  const Ring& rg = plan.rings[ring - 1];
  if (rg.empty()) return {ring, 0.0};
  if (irs.elements < 1) throw DomainError("irs_region_coefficient: IRS needs at least one element");
  const double f = sector_energy_integral(cfg, irs, rg, kappa, opt);
  return {ring, rg.irs * cell.density() * cfg.noise_power() * cfg.slot_s() * f};
}

RegionEnergyCoefficient irs_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                               const RingPlan& plan, int ring, double p_no,
                                               const QuadratureOptions& opt, bool exact_inverse) {
  check_p_no(p_no, "irs_region_coefficient");
  const auto& table = kappa_table(p_no);
  if (!exact_inverse) return irs_region_coefficient(cfg, cell, irs, plan, ring, table, opt);
  if (ring < 1 || ring > plan.ring_count()) throw DomainError("irs_region_coefficient: ring index out of range");
  const Ring& rg = plan.rings[ring - 1];
  if (rg.empty()) return {ring, 0.0};
  auto exact = [&](double a) { return table.exact(a); };
  const double f = sector_energy_integral(cfg, irs, rg, exact, opt);
  return {ring, rg.irs * cell.density() * cfg.noise_power() * cfg.slot_s() * f};
}

PowerAllocation equalize_power(const std::vector<RegionEnergyCoefficient>& coeffs, const RadioConfig& cfg,
                               double p_no) {
  check_p_no(p_no, "equalize_power");
  double total = 0.0;
  for (const auto& c : coeffs) {
    if (!(c.coefficient >= 0.0) || !std::isfinite(c.coefficient))
      throw DomainError("equalize_power: coefficients must be finite and >= 0");
    total += c.coefficient;
  }
  if (!(total > 0.0)) throw DomainError("equalize_power: all region coefficients are zero");
  PowerAllocation out;
  out.snr_threshold = cfg.energy_budget / total;
  out.ratios.reserve(coeffs.size());
  for (const auto& c : coeffs) out.ratios.push_back(c.coefficient / total);
  out.rate = std::log2(1.0 + out.snr_threshold);
  out.throughput = p_no * out.rate;
  return out;
}

ThroughputReport allocation_report(const std::string& scheme, const std::vector<RegionEnergyCoefficient>& coeffs,
                                   const PowerAllocation& alloc, double p_no) {
  ThroughputReport rep;
  rep.scheme = scheme;
  rep.min_nop = p_no;
  rep.snr_threshold = alloc.snr_threshold;
  rep.rate = alloc.rate;
  rep.throughput = alloc.throughput;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const bool active = coeffs[i].coefficient > 0.0;
    rep.regions.push_back({coeffs[i].region, alloc.ratios.at(i), active ? alloc.throughput : 0.0});
  }
  return rep;
}

const ScaledGammaQuantile& kappa_table(double p_no) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<ScaledGammaQuantile>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[p_no];
  if (!slot) slot = std::make_unique<ScaledGammaQuantile>(p_no);
  return *slot;
}

ThroughputReport benchmark_equal_power(const RadioConfig& cfg, const CellConfig& cell, double p_no) {
  check_p_no(p_no, "benchmark_equal_power");
  const double p = cfg.energy_budget / (cell.users * cfg.slot_s());
  const double eta = p * mean_gain_direct(cfg, cell.radius) * std::log(1.0 / p_no) / cfg.noise_power();
  return finish("ap-equal-power", p_no, {{0, 1.0, 0.0}}, {eta});
}

ThroughputReport benchmark_cipc(const RadioConfig& cfg, const CellConfig& cell, double p_no) {
  const std::vector<RegionEnergyCoefficient> c{ap_region_coefficient(cfg, cell, p_no, cell.radius)};
  return allocation_report("ap-cipc", c, equalize_power(c, cfg, p_no), p_no);
}

ThroughputReport benchmark_irs_equal_power(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                           const RingPlan& plan, double p_no, const BenchmarkGrid& grid) {
  check_p_no(p_no, "benchmark_irs_equal_power");
  const double p = cfg.energy_budget / (cell.users * cfg.slot_s());
  const double w = cfg.noise_power();
  const auto& kappa = kappa_table(p_no);
  const double inf = std::numeric_limits<double>::infinity();

  // Energy share of each region is its UE share under equal power.
  const double area = std::numbers::pi * cell.radius * cell.radius;
  std::vector<RegionThroughput> regions;
  std::vector<double> worst;
  const double edge = ap_only_edge(cell, plan);
  const double ap_area = std::numbers::pi * (plan.ap_disc_radius() * plan.ap_disc_radius() + cell.radius * cell.radius -
                                             plan.outer_radius * plan.outer_radius);
  regions.push_back({0, ap_area / area, 0.0});
  worst.push_back(edge >= 0.0 ? p * mean_gain_direct(cfg, edge) * std::log(1.0 / p_no) / w : inf);
  for (int i = 0; i < plan.ring_count(); ++i) {
    const Ring& rg = plan.rings[i];
    double eta = inf;
    if (!rg.empty()) {
      for_each_grid_point(rg, grid, [&](double r, double off) {
        const auto m = moments_at(cfg, irs, rg.irs_radius, r, off);
        eta = std::min(eta, p * m.mean / (kappa(m.mean * m.mean / m.variance) * w));
      });
    }
    const double share = std::numbers::pi * (rg.outer * rg.outer - rg.inner * rg.inner) / area;
    regions.push_back({i + 1, share, 0.0});
    worst.push_back(eta);
  }
  return finish("irs-equal-power", p_no, std::move(regions), worst);
}

ThroughputReport benchmark_irs_mean_cipc(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                         const RingPlan& plan, double p_no, const BenchmarkGrid& grid) {
  check_p_no(p_no, "benchmark_irs_mean_cipc");
  const auto& kappa = kappa_table(p_no);
  const double inf = std::numeric_limits<double>::infinity();

  // Every UE gets mean SNR gamma: power gamma W / E{Z^2} (or / g_d). The
  // budget fixes gamma through the area integral of the inverse mean gains.
  std::vector<double> area_terms{ap_inverse_gain_area(cfg, cell, plan)};
  for (const Ring& rg : plan.rings) {
    if (rg.empty()) {
      area_terms.push_back(0.0);
      continue;
    }
    auto inv_mean = [&](double r, double off) { return 1.0 / moments_at(cfg, irs, rg.irs_radius, r, off).mean; };
    area_terms.push_back(rg.irs * 2.0 * integrate_polar_sector(inv_mean, rg.inner, rg.outer, 0.5 * rg.sector_angle()));
  }
  double total = 0.0;
  for (double t : area_terms) total += t;
  const double gamma = cfg.energy_budget / (cell.density() * cfg.slot_s() * cfg.noise_power() * total);

  std::vector<RegionThroughput> regions;
  std::vector<double> worst;
  regions.push_back({0, area_terms[0] / total, 0.0});
  worst.push_back(ap_only_edge(cell, plan) >= 0.0 ? gamma * std::log(1.0 / p_no) : inf);
  for (int i = 0; i < plan.ring_count(); ++i) {
    const Ring& rg = plan.rings[i];
    double eta = inf;
    if (!rg.empty()) {
      for_each_grid_point(rg, grid, [&](double r, double off) {
        const auto m = moments_at(cfg, irs, rg.irs_radius, r, off);
        eta = std::min(eta, gamma / kappa(m.mean * m.mean / m.variance));
      });
    }
    regions.push_back({i + 1, area_terms[i + 1] / total, 0.0});
    worst.push_back(eta);
  }
  return finish("irs-mean-cipc", p_no, std::move(regions), worst);
}

}  // namespace irsplan
