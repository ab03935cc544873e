// Path loss and fading statistics for the direct AP-UE link and the
// phase-aligned AP-IRS-UE cascade.
#pragma once

#include <cmath>
#include <numbers>

#include "irsplan/numerics.hpp"

namespace irsplan {

inline constexpr double kSpeedOfLight = 299792458.0;

// Radio parameters, all in linear SI units.
struct RadioConfig {
  double carrier_hz = 2e9;
  double bandwidth_hz = 5e6;
  int subbands = 25;
  int slots = 20;
  double frame_s = 10e-3;
  double noise_psd = 3.9810717055349858e-21;  // W/Hz, -174 dBm/Hz
  double energy_budget = 1e-3;               // J per frame
  double pathloss_exponent = 3.0;
  double ap_height = 10.0;
  double irs_height = 1.0;

  double subband_hz() const { return bandwidth_hz / subbands; }
  double slot_s() const { return frame_s / slots; }
  double noise_power() const { return noise_psd * subband_hz(); }
  // Mean power gain at 1 m, (4 pi f_c / c)^-2.
  double ref_gain() const {
    const double k = 4.0 * std::numbers::pi * carrier_hz / kSpeedOfLight;
    return 1.0 / (k * k);
  }

  void validate() const;
};

struct IrsSpec {
  int elements = 2000;

  // (pi^2/16) N^2 + (1 - pi^2/16) N
  double beamforming_gain() const {
    constexpr double c = std::numbers::pi * std::numbers::pi / 16.0;
    const double n = elements;
    return c * n * n + (1.0 - c) * n;
  }
  void validate() const;
};

// Horizontal distances of one UE served through one IRS.
struct LinkGeometry {
  double ap_ue = 0.0;
  double ap_irs = 0.0;
  double irs_ue = 0.0;

  void validate() const;
};

struct MeanGains {
  double direct = 0.0;
  double ap_irs = 0.0;   // per element
  double irs_ue = 0.0;   // per element
};

// Moments of Z^2 and the moment-matched Gamma(shape, rate) law.
struct CompositeChannelStats {
  double mean_z2 = 0.0;
  double var_z2 = 0.0;
  double shape = 0.0;
  double rate = 0.0;

  static CompositeChannelStats from_moments(double mean, double variance);
};

struct OutageSpec {
  double rate_threshold = 1.0;  // bps/Hz
  double min_nop = 0.95;

  double snr_threshold() const { return std::exp2(rate_threshold) - 1.0; }
  double throughput() const { return min_nop * rate_threshold; }
  void validate() const;
};

inline double pathloss_gain(double ref_gain, double exponent, double dist2) {
  if (exponent == 3.0) return ref_gain / (dist2 * std::sqrt(dist2));  // common case, avoids pow
  return ref_gain * std::pow(dist2, -0.5 * exponent);
}

double mean_gain_direct(const RadioConfig& cfg, double r);
MeanGains mean_gains_irs(const RadioConfig& cfg, const LinkGeometry& geom);

// E{Z^2}; N = 0 reduces to the direct gain.
double mean_z2(const IrsSpec& irs, const MeanGains& gains);

// Mean and variance of Z^2 for Z = X + Y with X ~ Normal (CLT sum of N
// double-Rayleigh amplitudes) and Y ~ Rayleigh. Hot path for the planner.
struct Z2Moments {
  double mean;
  double variance;
};
inline Z2Moments z2_moments(int elements, double g_i, double g_r, double g_d) {
  constexpr double pi = std::numbers::pi;
  const double n = elements;
  const double cascade = g_i * g_r;
  const double mu = n * 0.25 * pi * std::sqrt(cascade);
  const double s2 = n * (1.0 - pi * pi / 16.0) * cascade;
  const double ey = std::sqrt(0.25 * pi * g_d);  // delta sqrt(pi/2), delta = sqrt(g_d/2)
  const double ey2 = g_d;
  const double ey3 = 1.5 * g_d * ey;             // 3 delta^3 sqrt(pi/2)
  const double ey4 = 2.0 * g_d * g_d;
  const double mu2 = mu * mu;
  const double ex2 = mu2 + s2;
  const double ex3 = mu * (mu2 + 3.0 * s2);
  const double m2 = ex2 + 2.0 * mu * ey + ey2;
  // E{Z^4} - E{Z^2}^2 expanded into central terms of Z^2 = X^2 + 2XY + Y^2,
  // which avoids cancellation when Z is nearly deterministic.
  const double var_x2 = 4.0 * mu2 * s2 + 2.0 * s2 * s2;
  const double var_y2 = ey4 - ey2 * ey2;
  const double var_xy = ex2 * ey2 - mu2 * ey * ey;
  const double cov_x2_xy = (ex3 - ex2 * mu) * ey;
  const double cov_y2_xy = mu * (ey3 - ey2 * ey);
  const double var = var_x2 + var_y2 + 4.0 * var_xy + 4.0 * cov_x2_xy + 4.0 * cov_y2_xy;
  return {m2, var};
}

CompositeChannelStats composite_stats(const IrsSpec& irs, const MeanGains& gains);

// exp(-W eta0 / (p g_d))
double nop_direct(const RadioConfig& cfg, double power, double g_d, double eta0);
// Q(shape, rate W eta0 / p)
double nop_irs(const CompositeChannelStats& stats, const RadioConfig& cfg, double power, double eta0);
// W eta0 rate / Q^-1(shape, p_no)
double required_power_irs(const CompositeChannelStats& stats, const RadioConfig& cfg, double eta0, double p_no,
                          const Tolerance& tol = {});

}  // namespace irsplan
