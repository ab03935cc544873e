// Power control: channel inversion in the AP-only region, NOP-equalizing
// power in IRS-served rings, and the common-throughput power split.
#pragma once

#include <string>
#include <vector>

#include "irsplan/channel.hpp"
#include "irsplan/geometry.hpp"
#include "irsplan/numerics.hpp"

namespace irsplan {

// Region energy equals snr_threshold * coefficient when the region meets the
// NOP target. Region 0 is the AP-only region, region i the i-th ring.
struct RegionEnergyCoefficient {
  int region = 0;
  double coefficient = 0.0;  // J
};

struct PowerAllocation {
  std::vector<double> ratios;  // per region, same order as the coefficients
  double snr_threshold = 0.0;  // eta0*
  double rate = 0.0;           // bps/Hz
  double throughput = 0.0;     // bps/Hz
};

struct RegionThroughput {
  int region = 0;
  double ratio = 0.0;
  double throughput = 0.0;
};

struct ThroughputReport {
  std::string scheme;
  double min_nop = 0.0;
  double snr_threshold = 0.0;
  double rate = 0.0;
  double throughput = 0.0;
  std::vector<RegionThroughput> regions;
};

// Transmit power giving mean received SNR `snr` at distance r.
double cipc_power(const RadioConfig& cfg, double snr, double r);

// Integral of (r^2 + H_A^2)^(n0/2) r over [0, R], closed form.
double f0_integral(const RadioConfig& cfg, double radius);

// AP-only region made of the disc [0, inner] plus the annulus (outer, R_ex]
// (empty when outer == R_ex).
RegionEnergyCoefficient ap_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, double p_no,
                                              double inner, double outer);
inline RegionEnergyCoefficient ap_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, double p_no,
                                                     double inner) {
  return ap_region_coefficient(cfg, cell, p_no, inner, cell.radius);
}

// Integrand of the sector energy integral at one UE position: beta / Q^-1(alpha, p).
template <class Kappa>
double sector_integrand(const RadioConfig& cfg, const IrsSpec& irs, double irs_radius, double r, double offset,
                        const Kappa& kappa) {
  const double a0 = cfg.ref_gain();
  const double n0 = cfg.pathloss_exponent;
  const double dh = cfg.ap_height - cfg.irs_height;
  const double g_i = pathloss_gain(a0, n0, irs_radius * irs_radius + dh * dh);
  const double d = irs_distance(r, irs_radius, offset);
  const double g_r = pathloss_gain(a0, n0, d * d + cfg.irs_height * cfg.irs_height);
  const double g_d = pathloss_gain(a0, n0, r * r + cfg.ap_height * cfg.ap_height);
  const auto m = z2_moments(irs.elements, g_i, g_r, g_d);
  return kappa(m.mean * m.mean / m.variance) / m.mean;
}

// Energy integral over one annulus sector of `ring` (per unit lambda W t0 eta0).
// The sector is symmetric about its IRS, so half is integrated and doubled.
template <class Kappa>
double sector_energy_integral(const RadioConfig& cfg, const IrsSpec& irs, const Ring& ring, const Kappa& kappa,
                              const QuadratureOptions& opt = {}) {
  if (ring.empty()) return 0.0;
  auto f = [&](double r, double offset) { return sector_integrand(cfg, irs, ring.irs_radius, r, offset, kappa); };
  return 2.0 * integrate_polar_sector(f, ring.inner, ring.outer, 0.5 * ring.sector_angle(), opt);
}

// C_i = M_i lambda W t0 F_i for the 1-based ring index. `exact_inverse`
// evaluates the Gamma quantile at every node instead of the tabulated curve.
RegionEnergyCoefficient irs_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                               const RingPlan& plan, int ring, double p_no,
                                               const QuadratureOptions& opt = {}, bool exact_inverse = false);
RegionEnergyCoefficient irs_region_coefficient(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                               const RingPlan& plan, int ring, const ScaledGammaQuantile& kappa,
                                               const QuadratureOptions& opt = {});

// Closed form: eta0* = E_total / sum(C), rho = C / sum(C).
PowerAllocation equalize_power(const std::vector<RegionEnergyCoefficient>& coeffs, const RadioConfig& cfg,
                               double p_no);

// Report with every region at the common throughput.
ThroughputReport allocation_report(const std::string& scheme, const std::vector<RegionEnergyCoefficient>& coeffs,
                                   const PowerAllocation& alloc, double p_no);

// Shared tabulated quantile curve for one NOP target. Built once per p_no and
// kept for the life of the process; safe to call concurrently.
const ScaledGammaQuantile& kappa_table(double p_no);

// AP-only baselines.
ThroughputReport benchmark_equal_power(const RadioConfig& cfg, const CellConfig& cell, double p_no);
ThroughputReport benchmark_cipc(const RadioConfig& cfg, const CellConfig& cell, double p_no);

// IRS placement taken from `plan`, power set by a policy other than NOP
// equalization. Both are repo-defined benchmarks; the worst UE position is
// found on a radial x angular grid of each sector.
struct BenchmarkGrid {
  int radial = 41;
  int angular = 21;
};
ThroughputReport benchmark_irs_equal_power(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                           const RingPlan& plan, double p_no, const BenchmarkGrid& grid = {});
ThroughputReport benchmark_irs_mean_cipc(const RadioConfig& cfg, const CellConfig& cell, const IrsSpec& irs,
                                         const RingPlan& plan, double p_no, const BenchmarkGrid& grid = {});

}  // namespace irsplan
