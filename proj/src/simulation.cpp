#include "irsplan/simulation.hpp"

#include <algorithm>
#include <map>
#include <numbers>

#include "irsplan/kernels.hpp"
#include "irsplan/rng.hpp"

namespace irsplan {

void McConfig::validate() const {
  if (n_topologies < 1) throw DomainError("McConfig: need at least one topology");
  if (n_fading < 1) throw DomainError("McConfig: need at least one fading draw");
  if (element_draws == ElementDraws::exact && pool_size < 1) throw DomainError("McConfig: pool size must be >= 1");
}

double Stratum::half_width() const {
  if (trials <= 0) return 0.0;
  const double p = nop();
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

Topology sample_topology(const Scenario& sc, const PlanResult& plan, std::uint64_t seed, std::uint64_t index) {
  const CellConfig& cell = sc.cell;
  const RadioConfig& cfg = sc.radio;
  const double eta0 = plan.allocation.snr_threshold;
  const double gamma = eta0 / std::log(1.0 / sc.min_nop);
  const std::uint64_t key = position_key(seed);

  Topology topo;
  topo.index = index;
  topo.ues.resize(static_cast<std::size_t>(cell.users));
  std::map<std::pair<int, int>, std::vector<int>> sectors;
  for (int k = 0; k < cell.users; ++k) {
    const auto [u1, u2] = CounterRng(key, ue_stream(index, static_cast<std::uint64_t>(k))).uniforms(0);
    UeSample& ue = topo.ues[k];
    ue.r = cell.radius * std::sqrt(u1);
    ue.azimuth = 2.0 * std::numbers::pi * u2;
    const UeLocation loc = locate_ue(cell, plan.plan, ue.r, ue.azimuth);
    ue.geometry = loc.geometry;
    if (!loc.ap_only()) {
      ue.region = loc.assignment->ring;
      ue.sector = loc.assignment->sector;
      sectors[{ue.region, ue.sector}].push_back(k);
    }
  }

  // The n_t UEs nearest to each IRS keep IRS service.
  const auto slots = static_cast<std::size_t>(cfg.slots);
  for (auto& [key_rs, members] : sectors) {
    std::stable_sort(members.begin(), members.end(),
                     [&](int a, int b) { return topo.ues[a].geometry.irs_ue < topo.ues[b].geometry.irs_ue; });
    for (std::size_t q = slots; q < members.size(); ++q) {
      topo.ues[members[q]].overflow = true;
      ++topo.overflow;
    }
    topo.max_sector_load = std::max(topo.max_sector_load, static_cast<int>(std::min(members.size(), slots)));
  }

  for (UeSample& ue : topo.ues) {
    if (ue.region == 0 || ue.overflow) {
      ue.power = cipc_power(cfg, gamma, ue.r);
    } else {
      const auto stats = composite_stats(sc.irs, mean_gains_irs(cfg, ue.geometry));
      ue.power = required_power_irs(stats, cfg, eta0, sc.min_nop);
    }
    topo.frame_energy += ue.power * cfg.slot_s();
  }
  return topo;
}

std::vector<double> make_unit_sum_pool(std::uint64_t seed, int elements, std::int64_t size, bool parallel) {
  if (size < 1) throw DomainError("make_unit_sum_pool: size must be >= 1");
  std::vector<double> pool(static_cast<std::size_t>(size));
  if (parallel)
    unit_sum_pool_parallel(seed, elements, pool);
  else
    unit_sum_pool_serial(seed, elements, pool);
  return pool;
}

McEstimate empirical_nop(std::span<const Topology> topologies, const Scenario& sc, int rings, double eta0,
                         const McConfig& mc, std::span<const double> pool) {
  mc.validate();
  const RadioConfig& cfg = sc.radio;
  const bool exact = mc.element_draws == ElementDraws::exact;
  if (exact && pool.empty()) {
    for (const Topology& t : topologies)
      for (const UeSample& ue : t.ues)
        if (ue.region > 0 && !ue.overflow) throw DomainError("empirical_nop: exact draws need a non-empty pool");
  }
  const std::span<const double> used_pool = exact ? pool : std::span<const double>{};
  const double n = sc.irs.elements;
  const double s_mean = n * 0.25 * std::numbers::pi;
  const double s_sd = std::sqrt(n * (1.0 - std::numbers::pi * std::numbers::pi / 16.0));

  McEstimate est;
  est.regions.resize(static_cast<std::size_t>(rings) + 1);
  est.regions[0].label = "ap-only";
  for (int i = 1; i <= rings; ++i) est.regions[i].label = "ring " + std::to_string(i);
  est.deciles.resize(10);
  for (int d = 0; d < 10; ++d) est.deciles[d].label = "decile " + std::to_string(d + 1);
  est.rate = std::log2(1.0 + eta0);

  double e_sum = 0.0, e_sq = 0.0;
  for (const Topology& topo : topologies) {
    for (std::size_t k = 0; k < topo.ues.size(); ++k) {
      const UeSample& ue = topo.ues[k];
      const double g_d = mean_gain_direct(cfg, ue.r);
      const double scale = ue.power / cfg.noise_power();
      const std::uint64_t stream = ue_stream(topo.index, k);
      std::int64_t hits;
      if (ue.region > 0 && !ue.overflow) {
        const MeanGains g = mean_gains_irs(cfg, ue.geometry);
        IrsUeDraws d;
        d.cascade_amp = std::sqrt(g.ap_irs * g.irs_ue);
        d.direct_gain = g_d;
        d.snr_scale = scale;
        d.stream = stream;
        d.surrogate_mean = s_mean;
        d.surrogate_sd = s_sd;
        if (exact) {
          const double u = CounterRng(position_key(mc.seed), stream).uniforms(1).first;
          d.pool_offset = static_cast<std::uint64_t>(u * static_cast<double>(used_pool.size()));
        }
        hits = mc.parallel ? count_irs_successes_parallel(mc.seed, used_pool, d, eta0, mc.n_fading)
                           : count_irs_successes_serial(mc.seed, used_pool, d, eta0, mc.n_fading);
      } else {
        const DirectUeDraws d{g_d, scale, stream};
        hits = mc.parallel ? count_direct_successes_parallel(mc.seed, d, eta0, mc.n_fading)
                           : count_direct_successes_serial(mc.seed, d, eta0, mc.n_fading);
      }
      const int region = ue.overflow ? 0 : ue.region;
      if (region > rings) throw DomainError("empirical_nop: UE region exceeds the ring count");
      est.regions[region].add(mc.n_fading, hits);
      const double frac = ue.r * ue.r / (sc.cell.radius * sc.cell.radius);
      est.deciles[std::min(9, static_cast<int>(10.0 * frac))].add(mc.n_fading, hits);
      if (ue.overflow) est.overflow.add(mc.n_fading, hits);
      est.all.add(mc.n_fading, hits);
    }
    e_sum += topo.frame_energy;
    e_sq += topo.frame_energy * topo.frame_energy;
    ++est.topologies;
  }

  double worst = 2.0;
  for (std::size_t i = 0; i < est.regions.size(); ++i) {
    const Stratum& s = est.regions[i];
    if (s.trials > 0 && s.nop() < worst) {
      worst = s.nop();
      est.binding_region = static_cast<int>(i);
    }
  }
  if (worst <= 1.0) {
    est.min_throughput = est.rate * worst;
    est.half_width = est.rate * est.regions[est.binding_region].half_width();
  }
  if (est.topologies > 0) {
    const double t = est.topologies;
    est.mean_frame_energy = e_sum / t;
    const double var = est.topologies > 1 ? std::max(0.0, (e_sq - e_sum * e_sum / t) / (t - 1.0)) : 0.0;
    est.energy_half_width = 1.96 * std::sqrt(var / t);
  }
  return est;
}

ValidationReport validate_plan_mc(const Scenario& sc, const PlanResult& plan, const McConfig& mc,
                                  std::span<const double> pool) {
  mc.validate();
  std::vector<Topology> topos;
  topos.reserve(static_cast<std::size_t>(mc.n_topologies));
  for (int t = 0; t < mc.n_topologies; ++t) topos.push_back(sample_topology(sc, plan, mc.seed, t));

  ValidationReport rep;
  rep.analytical = allocation_report(plan.method, plan.coefficients, plan.allocation, sc.min_nop);
  rep.mc = empirical_nop(topos, sc, plan.plan.ring_count(), plan.allocation.snr_threshold, mc, pool);
  rep.throughput_delta = rep.mc.min_throughput - rep.analytical.throughput;
  rep.within_interval = std::abs(rep.throughput_delta) <= rep.mc.half_width;
  for (const Stratum& s : rep.mc.regions) rep.region_nop_delta.push_back(s.trials > 0 ? s.nop() - sc.min_nop : 0.0);
  rep.energy_ratio = rep.mc.mean_frame_energy / sc.radio.energy_budget;
  for (const Topology& t : topos) rep.overflow_ues += t.overflow;
  return rep;
}

ValidationReport validate_plan_mc(const Scenario& sc, const PlanResult& plan, const McConfig& mc) {
  mc.validate();
  std::vector<double> pool;
  if (mc.element_draws == ElementDraws::exact && plan.plan.total_irs() > 0)
    pool = make_unit_sum_pool(mc.seed, sc.irs.elements, mc.pool_size, mc.parallel);
  return validate_plan_mc(sc, plan, mc, pool);
}

}  // namespace irsplan
