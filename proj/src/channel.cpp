#include "irsplan/channel.hpp"

#include <string>

namespace irsplan {

namespace {
void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}
}  // namespace

void RadioConfig::validate() const {
  require(carrier_hz > 0.0, "RadioConfig: carrier must be > 0");
  require(bandwidth_hz > 0.0 && subbands >= 1, "RadioConfig: need bandwidth > 0 and at least one sub-band");
  require(frame_s > 0.0 && slots >= 1, "RadioConfig: need frame > 0 and at least one slot");
  require(noise_psd > 0.0, "RadioConfig: noise density must be > 0");
  require(energy_budget > 0.0, "RadioConfig: energy budget must be > 0");
  require(pathloss_exponent >= 2.0, "RadioConfig: path-loss exponent must be >= 2");
  require(ap_height >= 1.0 && irs_height >= 1.0, "RadioConfig: AP and IRS heights must be >= 1 m");
}

void IrsSpec::validate() const { require(elements >= 0, "IrsSpec: element count must be >= 0"); }

void LinkGeometry::validate() const {
  require(ap_ue >= 0.0 && ap_irs >= 0.0 && irs_ue >= 0.0, "LinkGeometry: distances must be >= 0");
  const double slack = 1e-9 * (1.0 + ap_irs + irs_ue);
  require(ap_ue <= ap_irs + irs_ue + slack && ap_ue + slack >= std::abs(ap_irs - irs_ue),
          "LinkGeometry: distances violate the triangle inequality");
}

void OutageSpec::validate() const {
  require(rate_threshold >= 0.0, "OutageSpec: rate threshold must be >= 0");
  require(min_nop > 0.0 && min_nop < 1.0, "OutageSpec: NOP target must be in (0, 1)");
}

CompositeChannelStats CompositeChannelStats::from_moments(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0) || !std::isfinite(mean) || !std::isfinite(variance))
    throw NumericError("composite channel moments must be positive", mean, variance);
  return {mean, variance, mean * mean / variance, mean / variance};
}

double mean_gain_direct(const RadioConfig& cfg, double r) {
  require(r >= 0.0, "mean_gain_direct: r must be >= 0");
  return pathloss_gain(cfg.ref_gain(), cfg.pathloss_exponent, r * r + cfg.ap_height * cfg.ap_height);
}

MeanGains mean_gains_irs(const RadioConfig& cfg, const LinkGeometry& geom) {
  geom.validate();
  const double a0 = cfg.ref_gain();
  const double n0 = cfg.pathloss_exponent;
  const double dh = cfg.ap_height - cfg.irs_height;
  return {
      pathloss_gain(a0, n0, geom.ap_ue * geom.ap_ue + cfg.ap_height * cfg.ap_height),
      pathloss_gain(a0, n0, geom.ap_irs * geom.ap_irs + dh * dh),
      pathloss_gain(a0, n0, geom.irs_ue * geom.irs_ue + cfg.irs_height * cfg.irs_height),
  };
}

double mean_z2(const IrsSpec& irs, const MeanGains& gains) {
  irs.validate();
  const double cascade = gains.ap_irs * gains.irs_ue;
  return irs.beamforming_gain() * cascade +
         irs.elements * 0.25 * std::numbers::pi * std::sqrt(std::numbers::pi * cascade * gains.direct) + gains.direct;
}

CompositeChannelStats composite_stats(const IrsSpec& irs, const MeanGains& gains) {
  irs.validate();
  require(irs.elements >= 1, "composite_stats: need at least one element");
  const auto m = z2_moments(irs.elements, gains.ap_irs, gains.irs_ue, gains.direct);
  return CompositeChannelStats::from_moments(m.mean, m.variance);
}

double nop_direct(const RadioConfig& cfg, double power, double g_d, double eta0) {
  require(power > 0.0, "nop_direct: power must be > 0");
  require(g_d > 0.0 && eta0 >= 0.0, "nop_direct: need g_d > 0 and eta0 >= 0");
  return std::exp(-cfg.noise_power() * eta0 / (power * g_d));
}

double nop_irs(const CompositeChannelStats& stats, const RadioConfig& cfg, double power, double eta0) {
  require(power > 0.0, "nop_irs: power must be > 0");
  require(eta0 >= 0.0, "nop_irs: eta0 must be >= 0");
  return reg_upper_gamma(stats.shape, stats.rate * cfg.noise_power() * eta0 / power);
}

double required_power_irs(const CompositeChannelStats& stats, const RadioConfig& cfg, double eta0, double p_no,
                          const Tolerance& tol) {
  require(p_no > 0.0 && p_no < 1.0, "required_power_irs: p_no must be in (0, 1)");
  require(eta0 > 0.0, "required_power_irs: eta0 must be > 0");
  return cfg.noise_power() * eta0 * stats.rate / inv_reg_upper_gamma(stats.shape, p_no, tol);
}

}  // namespace irsplan
