#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irsplan/planner.hpp"
#include "irsplan/powerctl.hpp"
#include "irsplan/rng.hpp"

using namespace irsplan;
using doctest::Approx;

namespace {

const double pi = std::numbers::pi;

RingPlan reference_plan() {
  CellConfig cell;
  return RingPlan::build(cell, 250.0, {225.0, 185.0, 120.0}, {10, 57, 33});
}

std::vector<RegionEnergyCoefficient> coefficients(const RingPlan& plan, const QuadratureOptions& q) {
  RadioConfig cfg;
  CellConfig cell;
  IrsSpec irs;
  std::vector<RegionEnergyCoefficient> c{ap_region_coefficient(cfg, cell, 0.95, plan.ap_disc_radius())};
  for (int i = 1; i <= plan.ring_count(); ++i) c.push_back(irs_region_coefficient(cfg, cell, irs, plan, i, 0.95, q));
  return c;
}

}  // namespace

TEST_CASE("CIPC power") {
  RadioConfig one;
  one.ap_height = 1.0;
  one.pathloss_exponent = 2.0;
  CHECK(cipc_power(one, 3.0, 0.0) == Approx(3.0 * one.noise_power() / one.ref_gain()).epsilon(1e-15));
  RadioConfig cfg;
  for (double r : {0.0, 50.0, 250.0}) {
    const double p = cipc_power(cfg, 4.0, r);
    CHECK(cipc_power(cfg, 8.0, r) == Approx(2.0 * p).epsilon(1e-15));
    CHECK(p * mean_gain_direct(cfg, r) / cfg.noise_power() == Approx(4.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cipc_power(cfg, 0.0, 1.0), DomainError);
}

TEST_CASE("F0 closed form") {
  RadioConfig cfg;
  CHECK(f0_integral(cfg, 0.0) == 0.0);
  const double h = cfg.ap_height;
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  for (double R : {10.0, 100.0, 250.0}) {
    const double quad = integrate_radial([&](double r) { return std::pow(r * r + h * h, 1.5) * r; }, 0.0, R, q);
    CHECK(f0_integral(cfg, R) == Approx(quad).epsilon(1e-8));
  }
  RadioConfig sq;
  sq.pathloss_exponent = 2.0;
  CHECK(f0_integral(sq, 80.0) == Approx(std::pow(80.0, 4) / 4 + h * h * 80.0 * 80.0 / 2).epsilon(1e-13));
}

TEST_CASE("AP-only region coefficient") {
  RadioConfig cfg;
  CellConfig cell;
  CHECK(ap_region_coefficient(cfg, cell, 0.95, 0.0).coefficient == 0.0);
  const double c95 = ap_region_coefficient(cfg, cell, 0.95, 100.0).coefficient;
  const double c99 = ap_region_coefficient(cfg, cell, 0.99, 100.0).coefficient;
  CHECK(c99 > c95);
  CHECK(c99 * std::log(1 / 0.99) == Approx(c95 * std::log(1 / 0.95)).epsilon(1e-13));
  CHECK_THROWS_AS(ap_region_coefficient(cfg, cell, 1.0, 100.0), DomainError);

  // Spend exactly eta0 * C0, recover the mean SNR from the energy, check the NOP.
  const double eta0 = 7.0;
  const double energy = eta0 * c95;
  const double lambda = cell.density();
  const double gbar = cfg.ref_gain() * energy /
                      (2.0 * pi * lambda * cfg.noise_power() * cfg.slot_s() * f0_integral(cfg, 100.0));
  CHECK(std::exp(-eta0 / gbar) == Approx(0.95).epsilon(1e-13));
  CHECK(0.95 * std::log2(1.0 + eta0) == Approx(0.95 * std::log2(8.0)).epsilon(1e-15));

  // Disc plus outer annulus.
  const double both = ap_region_coefficient(cfg, cell, 0.95, 100.0, 200.0).coefficient;
  const double outer_only = ap_region_coefficient(cfg, cell, 0.95, 0.0, 200.0).coefficient;
  CHECK(both == Approx(c95 + outer_only).epsilon(1e-12));
}

TEST_CASE("IRS region coefficient basics") {
  RadioConfig cfg;
  CellConfig cell;
  IrsSpec irs;
  RingPlan flat = RingPlan::build(cell, 250.0, {250.0, 200.0}, {5, 20});
  CHECK(irs_region_coefficient(cfg, cell, irs, flat, 1, 0.95).coefficient == 0.0);
  const double c = irs_region_coefficient(cfg, cell, irs, flat, 2, 0.95).coefficient;
  CHECK(c > 0.0);
  CellConfig dense = cell;
  dense.users = 1000;
  CHECK(irs_region_coefficient(cfg, dense, irs, flat, 2, 0.95).coefficient == Approx(2.0 * c).epsilon(1e-12));
  CHECK_THROWS_AS(irs_region_coefficient(cfg, cell, irs, flat, 3, 0.95), DomainError);
}

TEST_CASE("sector integrals at 32 and 64 points and with the tabulated quantile") {
  const auto plan = reference_plan();
  RadioConfig cfg;
  CellConfig cell;
  IrsSpec irs;
  QuadratureOptions q32, q64;
  q32.points = 32;
  q64.points = 64;
  q32.rel_tol = q64.rel_tol = 1e-12;
  for (int i = 1; i <= 3; ++i) {
    const double a = irs_region_coefficient(cfg, cell, irs, plan, i, 0.95, q32, true).coefficient;
    const double b = irs_region_coefficient(cfg, cell, irs, plan, i, 0.95, q64, true).coefficient;
    CHECK(a == Approx(b).epsilon(1e-6));
    const double table = irs_region_coefficient(cfg, cell, irs, plan, i, 0.95, q64).coefficient;
    CHECK(table == Approx(b).epsilon(1e-10));
    const double planning = irs_region_coefficient(cfg, cell, irs, plan, i, 0.95, planning_quadrature()).coefficient;
    CHECK(planning == Approx(b).epsilon(1e-7));
  }
}

TEST_CASE("IRS region energy audit by Monte Carlo over UE positions") {
  RadioConfig cfg;
  CellConfig cell;
  IrsSpec irs;
  const auto plan = reference_plan();
  const double eta0 = 20.0;
  for (int i : {2, 3}) {
    const Ring& ring = plan.rings[i - 1];
    const double c = irs_region_coefficient(cfg, cell, irs, plan, i, 0.95).coefficient;
    const CounterRng rng(31, static_cast<std::uint64_t>(i));
    const int n = 100000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto [u1, u2] = rng.uniforms(k);
      const double r = std::sqrt(ring.inner * ring.inner + u1 * (ring.outer * ring.outer - ring.inner * ring.inner));
      const auto loc = locate_ue(cell, plan, r, 2.0 * pi * u2);
      REQUIRE(loc.assignment->ring == i);
      const auto st = composite_stats(irs, mean_gains_irs(cfg, loc.geometry));
      sum += required_power_irs(st, cfg, eta0, 0.95);
    }
    const double area = pi * (ring.outer * ring.outer - ring.inner * ring.inner);
    const double energy = cell.density() * area * cfg.slot_s() * sum / n;
    CHECK(energy == Approx(eta0 * c).epsilon(0.01));
  }
}

TEST_CASE("equalize_power closed form") {
  RadioConfig cfg;
  auto one = equalize_power({{0, 2e-4}}, cfg, 0.95);
  CHECK(one.ratios == std::vector<double>{1.0});
  CHECK(one.snr_threshold == Approx(cfg.energy_budget / 2e-4));
  auto two = equalize_power({{0, 3e-5}, {1, 3e-5}}, cfg, 0.95);
  CHECK(two.ratios[0] == Approx(0.5));
  CHECK(two.ratios[1] == Approx(0.5));
  CHECK_THROWS_AS(equalize_power({{0, 0.0}, {1, 0.0}}, cfg, 0.95), DomainError);
  CHECK_THROWS_AS(equalize_power({{0, -1.0}}, cfg, 0.95), DomainError);

  const auto c = coefficients(reference_plan(), planning_quadrature());
  const auto alloc = equalize_power(c, cfg, 0.95);
  double total = 0.0, rho = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += alloc.snr_threshold * c[i].coefficient;
    rho += alloc.ratios[i];
    CHECK(alloc.ratios[i] * cfg.energy_budget == Approx(alloc.snr_threshold * c[i].coefficient).epsilon(1e-13));
  }
  CHECK(total == Approx(cfg.energy_budget).epsilon(1e-10));
  CHECK(rho == Approx(1.0).epsilon(1e-14));
  CHECK(alloc.throughput == Approx(0.95 * std::log2(1.0 + alloc.snr_threshold)).epsilon(1e-15));

  double sum_c = 0.0;
  for (const auto& x : c) sum_c += x.coefficient;
  Tolerance tol;
  tol.abs_tol = 1e-12;
  const double root =
      bisect([&](double eta) { return eta * sum_c - cfg.energy_budget; }, 0.0, 10.0 * alloc.snr_threshold, tol);
  CHECK(std::abs(root - alloc.snr_threshold) < 1e-8);

  const auto rep = allocation_report("x", c, alloc, 0.95);
  double lo = 1e9, hi = -1e9;
  for (const auto& r : rep.regions) {
    lo = std::min(lo, r.throughput);
    hi = std::max(hi, r.throughput);
  }
  CHECK(hi - lo < 1e-12);
}

TEST_CASE("allocated powers meet the NOP target at sampled positions") {
  RadioConfig cfg;
  CellConfig cell;
  IrsSpec irs;
  const auto plan = reference_plan();
  const auto alloc = equalize_power(coefficients(plan, planning_quadrature()), cfg, 0.95);
  const double eta0 = alloc.snr_threshold;
  const double gbar = eta0 / std::log(1.0 / 0.95);
  const CounterRng rng(5, 0);
  for (int k = 0; k < 2000; ++k) {
    const auto [u1, u2] = rng.uniforms(k);
    const double r = 250.0 * std::sqrt(u1);
    const auto loc = locate_ue(cell, plan, r, 2.0 * pi * u2);
    if (loc.ap_only()) {
      const double p = cipc_power(cfg, gbar, r);
      CHECK(nop_direct(cfg, p, mean_gain_direct(cfg, r), eta0) == Approx(0.95).epsilon(1e-13));
    } else {
      const auto st = composite_stats(irs, mean_gains_irs(cfg, loc.geometry));
      CHECK(std::abs(nop_irs(st, cfg, required_power_irs(st, cfg, eta0, 0.95), eta0) - 0.95) < 1e-8);
    }
  }
}

TEST_CASE("AP-only baselines") {
  RadioConfig cfg;
  CellConfig cell;
  const auto eq = benchmark_equal_power(cfg, cell, 0.95);
  const auto ci = benchmark_cipc(cfg, cell, 0.95);
  CHECK(ci.throughput > eq.throughput);
  const std::vector<RegionEnergyCoefficient> c{ap_region_coefficient(cfg, cell, 0.95, cell.radius)};
  CHECK(ci.throughput == equalize_power(c, cfg, 0.95).throughput);
  RadioConfig half = cfg;
  half.energy_budget *= 0.5;
  CHECK(benchmark_equal_power(half, cell, 0.95).throughput < eq.throughput);
  CHECK(benchmark_cipc(half, cell, 0.95).throughput < ci.throughput);
  double prev = 1e9;
  for (double p : {0.9, 0.99, 0.999, 0.99999, 1.0 - 1e-9}) {
    const double v = benchmark_equal_power(cfg, cell, p).throughput;
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);
  // Values behind the headline gains.
  CHECK(eq.throughput == Approx(1.653242).epsilon(1e-6));
  CHECK(ci.throughput == Approx(2.635899).epsilon(1e-6));
}

TEST_CASE("IRS benchmarks with other power control") {
  Scenario sc;
  const auto res = evaluate_plan(sc, reference_plan(), "line-search");
  const auto eq = benchmark_irs_equal_power(sc.radio, sc.cell, sc.irs, res.plan, sc.min_nop);
  const auto mc = benchmark_irs_mean_cipc(sc.radio, sc.cell, sc.irs, res.plan, sc.min_nop);
  CHECK(eq.scheme == "irs-equal-power");
  CHECK(mc.scheme == "irs-mean-cipc");
  CHECK(eq.throughput < res.throughput);
  CHECK(mc.throughput < res.throughput);
  CHECK(eq.throughput > 0.0);
}

TEST_CASE("kappa table is shared per target") {
  CHECK(&kappa_table(0.95) == &kappa_table(0.95));
  CHECK(&kappa_table(0.95) != &kappa_table(0.9));
}
