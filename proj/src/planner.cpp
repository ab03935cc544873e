#include "irsplan/planner.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "irsplan/kernels.hpp"

namespace irsplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void check_plan(const Scenario& sc, const PlanResult& res, int total_irs) {
  const auto v = validate_plan(sc.cell, res.plan, total_irs);
  if (!v.empty()) throw std::logic_error("planner produced an invalid plan: " + v.front().detail);
}

int min_irs_for(double users, double cap) {
  if (users <= 1e-9) return 0;
  return std::max(1, static_cast<int>(std::ceil(users / cap - 1e-9)));
}
}  // namespace

void Scenario::validate() const {
  radio.validate();
  cell.validate();
  irs.validate();
  if (!(min_nop > 0.0 && min_nop < 1.0)) throw DomainError("Scenario: NOP target must be in (0, 1)");
}

void SearchGrid::validate() const {
  if (!(radius_step > 0.0)) throw DomainError("SearchGrid: radius step must be > 0");
  if (!(rho_step > 0.0 && rho_step < 1.0)) throw DomainError("SearchGrid: rho step must be in (0, 1)");
  if (max_rings < 1) throw DomainError("SearchGrid: need at least one ring");
}

double coverage_range_direct(const RadioConfig& cfg, double power, double snr) {
  if (!(power > 0.0) || !(snr > 0.0)) throw DomainError("coverage_range_direct: power and SNR must be > 0");
  const double dist2 = std::pow(power * cfg.ref_gain() / (cfg.noise_power() * snr), 2.0 / cfg.pathloss_exponent);
  const double r2 = dist2 - cfg.ap_height * cfg.ap_height;
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

CoverageResult coverage_range(const RadioConfig& cfg, const IrsSpec& irs, double power, double snr,
                              std::optional<double> irs_distance, const Tolerance& tol) {
  const double base = coverage_range_direct(cfg, power, snr);
  const double l = irs_distance.value_or(0.0);
  if (!(l >= 0.0)) throw DomainError("coverage_range: IRS distance must be >= 0");
  auto margin = [&](double r) {
    if (!irs_distance) return power * mean_gain_direct(cfg, r) / cfg.noise_power() - snr;
    LinkGeometry g{r, l, r - l};
    return power * mean_z2(irs, mean_gains_irs(cfg, g)) / cfg.noise_power() - snr;
  };
  if (margin(l) < 0.0) return {l, true};
  const double hi = 10.0 * std::max(base, l + 1.0);
  return {bisect(margin, l, hi, tol), false};
}

PlanResult evaluate_plan(const Scenario& sc, RingPlan plan, std::string method, const QuadratureOptions& opt) {
  const auto& kappa = kappa_table(sc.min_nop);
  PlanResult res;
  res.coefficients.push_back(
      ap_region_coefficient(sc.radio, sc.cell, sc.min_nop, plan.ap_disc_radius(), plan.outer_radius));
  for (int i = 1; i <= plan.ring_count(); ++i)
    res.coefficients.push_back(irs_region_coefficient(sc.radio, sc.cell, sc.irs, plan, i, kappa, opt));
  res.allocation = equalize_power(res.coefficients, sc.radio, sc.min_nop);
  plan.power_ratios = res.allocation.ratios;
  res.plan = std::move(plan);
  res.throughput = res.allocation.throughput;
  res.method = std::move(method);
  return res;
}

double irs_area_fraction(const CellConfig& cell, const RingPlan& plan) {
  double a = 0.0;
  for (const Ring& r : plan.rings)
    if (!r.empty()) a += r.outer * r.outer - r.inner * r.inner;
  return a / (cell.radius * cell.radius);
}

// ---------------------------------------------------------------------------
// Exhaustive search. Ring i spans grid radii [rad[j], rad[o]] with x IRSs.
// The objective sum(C) is separable over rings, so the enumeration is done
// as a dynamic program over (ring, outer radius, IRSs left, nonempty rings).

namespace {

class RingTable {
 public:
  RingTable(const Scenario& sc, const std::vector<double>& rad, int total_irs, bool outer_rings,
            bool search_outer, const QuadratureOptions& opt)
      : rad_(rad), n_(static_cast<int>(rad.size())), m_(total_irs) {
    const double lambda = sc.cell.density();
    const double cap = sc.cell.max_users_per_irs;
    scale_ = lambda * sc.radio.noise_power() * sc.radio.slot_s();
    min_irs_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int o = 0; o < n_; ++o)
      for (int j = 0; j < o; ++j) min_irs_[o * n_ + j] = min_irs_for(lambda * kPi * (rad[o] * rad[o] - rad[j] * rad[j]), cap);

    m1_ = std::min(sc.cell.near_ap_max, total_irs);
    near_.assign(static_cast<std::size_t>(n_) * n_ * (m1_ + 1), kInf);
    if (outer_rings) far_.assign(static_cast<std::size_t>(n_) * n_ * (m_ + 1), kInf);

    std::vector<SectorJob> jobs;
    std::vector<double*> slots;
    for (int o = search_outer ? 1 : n_ - 1; o < n_; ++o)
      for (int j = 0; j < o; ++j)
        for (int x = min_irs(o, j); x <= m1_; ++x) {
          jobs.push_back({rad[o], rad[j], sc.cell.near_ap_radius, x});
          slots.push_back(&near_[idx(o, j, x, m1_)]);
        }
    if (outer_rings)
      for (int o = 1; o < n_; ++o)
        for (int j = 0; j < o; ++j)
          for (int x = min_irs(o, j); x <= m_; ++x) {
            jobs.push_back({rad[o], rad[j], 0.5 * (rad[o] + rad[j]), x});
            slots.push_back(&far_[idx(o, j, x, m_)]);
          }
    std::vector<double> f(jobs.size());
    sector_integrals_parallel(sc.radio, sc.irs, kappa_table(sc.min_nop), jobs, f, opt);
    for (std::size_t k = 0; k < jobs.size(); ++k) *slots[k] = scale_ * jobs[k].irs * f[k];
  }

  int min_irs(int o, int j) const { return min_irs_[o * n_ + j]; }
  int near_max() const { return m1_; }
  // Coefficient of a positive-width ring; +inf when the IRS count is too small.
  double near(int o, int j, int x) const { return near_[idx(o, j, x, m1_)]; }
  double far(int o, int j, int x) const { return far_[idx(o, j, x, m_)]; }

 private:
  std::size_t idx(int o, int j, int x, int mx) const {
    return (static_cast<std::size_t>(o) * n_ + j) * (mx + 1) + x;
  }

  std::vector<double> rad_;
  int n_;
  int m_;
  int m1_ = 0;
  double scale_ = 0.0;
  std::vector<int> min_irs_;
  std::vector<double> near_;
  std::vector<double> far_;
};

struct Choice {
  int inner = -1;
  int irs = 0;
};

std::vector<double> radius_grid(const CellConfig& cell, double step) {
  std::vector<double> rad;
  for (int j = 0; j * step < cell.radius - 1e-9; ++j) rad.push_back(j * step);
  rad.push_back(cell.radius);
  return rad;
}
}  // namespace

struct LineSearch::Impl {
  Impl(const Scenario& s, int m, const SearchGrid& g)
      : sc(s),
        grid(g),
        rad(radius_grid(s.cell, g.radius_step)),
        max_irs(m),
        table(s, rad, m, g.max_rings >= 2, g.search_outer_radius, g.quadrature) {}

  Scenario sc;
  SearchGrid grid;
  std::vector<double> rad;
  int max_irs;
  RingTable table;
};

LineSearch::LineSearch(const Scenario& sc, int max_irs, const SearchGrid& grid) {
  sc.validate();
  grid.validate();
  if (max_irs < 1) throw DomainError("line_search: need at least one IRS");
  impl_ = std::make_unique<Impl>(sc, max_irs, grid);
}
LineSearch::~LineSearch() = default;
LineSearch::LineSearch(LineSearch&&) noexcept = default;
LineSearch& LineSearch::operator=(LineSearch&&) noexcept = default;
int LineSearch::max_irs() const noexcept { return impl_->max_irs; }
const SearchGrid& LineSearch::grid() const noexcept { return impl_->grid; }

PlanResult line_search(const Scenario& sc, int total_irs, int rings, const SearchGrid& grid) {
  SearchGrid g = grid;
  g.max_rings = std::max(g.max_rings, rings);
  return LineSearch(sc, std::max(total_irs, 1), g).solve(total_irs, rings);
}

PlanResult LineSearch::solve(int total_irs, int rings) const {
  const Scenario& sc = impl_->sc;
  const SearchGrid& grid = impl_->grid;
  const RingTable& table = impl_->table;
  const std::vector<double>& rad = impl_->rad;
  if (total_irs < 1) throw DomainError("line_search: need at least one IRS");
  if (total_irs > impl_->max_irs) throw DomainError("line_search: IRS count exceeds the table built for this search");
  if (rings < 1 || rings > grid.max_rings) throw DomainError("line_search: ring count outside [1, grid.max_rings]");
  const CellConfig& cell = sc.cell;
  if (rings == 1 && total_irs > cell.near_ap_max)
    throw InfeasibleError("line_search: a single ring holds at most M_1,max IRSs",
                          {"near-AP IRS count: M_1 <= " + std::to_string(cell.near_ap_max)});

  const int n = static_cast<int>(rad.size());
  const int top = n - 1;
  const int m_all = total_irs;
  const double ap_scale = 2.0 * kPi * cell.density() * sc.radio.noise_power() * sc.radio.slot_s() /
                          (sc.radio.ref_gain() * std::log(1.0 / sc.min_nop));
  std::vector<double> f0(n);
  for (int j = 0; j < n; ++j) f0[j] = f0_integral(sc.radio, rad[j]);

  // value[level][o][m][k]: least cost of rings level..rings plus the AP disc,
  // given the outer radius index o, m IRSs left and k nonempty rings among them.
  const int kk = rings;  // k in [0, rings - 1] for levels >= 2
  auto at = [&](int o, int m, int k) { return (static_cast<std::size_t>(o) * (m_all + 1) + m) * kk + k; };
  const std::size_t layer = static_cast<std::size_t>(n) * (m_all + 1) * kk;
  std::vector<std::vector<double>> value(rings + 2, std::vector<double>());
  std::vector<std::vector<Choice>> choice(rings + 2);
  value[rings + 1].assign(layer, kInf);
  for (int o = 0; o < n; ++o) value[rings + 1][at(o, 0, 0)] = ap_scale * f0[o];

  for (int level = rings; level >= 2; --level) {
    const auto& next = value[level + 1];
    auto& cur = value[level];
    auto& ch = choice[level];
    cur.assign(layer, kInf);
    ch.assign(layer, Choice{});
#pragma omp parallel for schedule(dynamic)
    for (int o = 0; o < n; ++o) {
      for (int m = 0; m <= m_all; ++m) {
        for (int k = 0; k < kk; ++k) {
          double best = kInf;
          Choice bc;
          for (int x = 0; x <= m; ++x) {  // zero-width ring, IRSs parked
            const double v = next[at(o, m - x, k)];
            if (v < best) {
              best = v;
              bc = {o, x};
            }
          }
          if (k >= 1) {
            for (int j = 0; j < o; ++j) {
              for (int x = std::max(1, table.min_irs(o, j)); x <= m; ++x) {
                const double v = table.far(o, j, x) + next[at(j, m - x, k - 1)];
                if (v < best) {
                  best = v;
                  bc = {j, x};
                }
              }
            }
          }
          cur[at(o, m, k)] = best;
          ch[at(o, m, k)] = bc;
        }
      }
    }
  }

  struct Candidate {
    double cost = kInf;
    int nonempty = 0;
    int outer = 0;
    int inner = 0;
    int irs = 0;
    int rest_k = 0;
  };
  std::vector<Candidate> cands;
  const auto& second = value[2];
  for (int o0 = grid.search_outer_radius ? 0 : top; o0 <= top; ++o0) {
    const double annulus = ap_scale * (f0[top] - f0[o0]);
    for (int j = 0; j <= o0; ++j) {
      for (int x = 0; x <= std::min(table.near_max(), m_all); ++x) {
        double c1 = 0.0;
        int k1 = 0;
        if (j < o0) {
          if (x < std::max(1, table.min_irs(o0, j))) continue;
          c1 = table.near(o0, j, x);
          k1 = 1;
        }
        for (int k2 = 0; k2 < kk; ++k2) {
          const double rest = second[at(j, m_all - x, k2)];
          if (!std::isfinite(rest) || !std::isfinite(c1)) continue;
          const Candidate c{annulus + c1 + rest, k1 + k2, o0, j, x, k2};
          // keep the cheapest per (nonempty, inner, outer)
          auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate& e) {
            return e.nonempty == c.nonempty && e.inner == c.inner && e.outer == c.outer;
          });
          if (it == cands.end())
            cands.push_back(c);
          else if (c.cost < it->cost)
            *it = c;
        }
      }
    }
  }
  if (cands.empty()) {
    std::vector<std::string> binding{"near-AP IRS count: M_1 <= " + std::to_string(cell.near_ap_max)};
    binding.push_back("users per IRS: K_i <= " + std::to_string(cell.max_users_per_irs));
    throw InfeasibleError("line_search: no feasible ring configuration", binding);
  }

  const double budget = sc.radio.energy_budget;
  auto nu = [&](double cost) { return sc.min_nop * std::log2(1.0 + budget / cost); };
  double best_nu = -kInf;
  for (const auto& c : cands) best_nu = std::max(best_nu, nu(c.cost));
  const Candidate* pick = nullptr;
  for (const auto& c : cands) {
    if (nu(c.cost) < best_nu - 1e-9) continue;
    if (!pick || std::tie(c.nonempty, c.inner) < std::tie(pick->nonempty, pick->inner) ||
        (c.nonempty == pick->nonempty && c.inner == pick->inner && c.outer > pick->outer))
      pick = &c;
  }

  std::vector<double> inner{rad[pick->inner]};
  std::vector<int> counts{pick->irs};
  std::vector<int> parked;  // zero-width rings after the first, listed innermost
  int o = pick->inner, m = m_all - pick->irs, k = pick->rest_k;
  for (int level = 2; level <= rings; ++level) {
    const Choice c = choice[level][at(o, m, k)];
    if (c.inner < o) {
      --k;
      inner.push_back(rad[c.inner]);
      counts.push_back(c.irs);
    } else {
      parked.push_back(c.irs);
    }
    o = c.inner;
    m -= c.irs;
  }
  for (int x : parked) {
    inner.push_back(inner.back());
    counts.push_back(x);
  }
  auto res = evaluate_plan(sc, RingPlan::build(cell, rad[pick->outer], inner, counts), "line-search",
                           grid.quadrature);
  check_plan(sc, res, total_irs);
  return res;
}

// ---------------------------------------------------------------------------

RingPlan algorithm1_rings(const CellConfig& cell, int total_irs, int rings) {
  cell.validate();
  if (total_irs < 1) throw DomainError("algorithm1: need at least one IRS");
  const double lambda = cell.density();
  const double cap = cell.max_users_per_irs;
  const double r_ex = cell.radius;
  auto shrink = [](double outer, double area) { return std::sqrt(std::max(0.0, outer * outer - area / kPi)); };

  if (total_irs <= cell.near_ap_max) {
    const double r1 = shrink(r_ex, total_irs * cap / lambda);
    return RingPlan::build(cell, r_ex, {r1}, {total_irs});
  }
  if (rings < 2) throw DomainError("algorithm1: more than M_1,max IRSs needs at least two rings");

  const int m1 = cell.near_ap_max;
  const double r1 = shrink(r_ex, m1 * cap / lambda);
  double load = cap;
  double r_last = shrink(r_ex, total_irs * cap / lambda);
  if (total_irs * cap / lambda > kPi * r_ex * r_ex) {
    r_last = 0.0;
    load = lambda * kPi * r1 * r1 / (total_irs - m1);
  }
  const double sector = load / lambda;

  std::vector<double> inner{r1};
  std::vector<int> counts{m1};
  double prev = r1;
  int used = m1;
  for (int i = 2; i <= rings; ++i) {
    const int left = total_irs - used;
    int x = left;
    if (i < rings) {
      const double delta = (prev - r_last) / (rings - i + 1);
      const double trial = prev - delta;
      const double users = lambda * kPi * (prev * prev - trial * trial);
      x = std::min(left, static_cast<int>(std::ceil(users / load - 1e-9)));
      x = std::max(x, 0);
    }
    const double r = shrink(prev, x * sector);
    inner.push_back(r);
    counts.push_back(x);
    prev = r;
    used += x;
  }
  return RingPlan::build(cell, r_ex, inner, counts);
}

PlanResult algorithm1(const Scenario& sc, int total_irs, int max_rings, const QuadratureOptions& opt) {
  sc.validate();
  if (total_irs <= sc.cell.near_ap_max) {
    auto res = evaluate_plan(sc, algorithm1_rings(sc.cell, total_irs, 1), "algorithm1", opt);
    check_plan(sc, res, total_irs);
    return res;
  }
  if (max_rings < 2)
    throw InfeasibleError("algorithm1: more than M_1,max IRSs needs at least two rings",
                          {"near-AP IRS count: M_1 <= " + std::to_string(sc.cell.near_ap_max)});
  std::optional<PlanResult> best;
  for (int i = 2; i <= max_rings; ++i) {
    auto res = evaluate_plan(sc, algorithm1_rings(sc.cell, total_irs, i), "algorithm1", opt);
    if (!best || res.throughput > best->throughput) best = std::move(res);
  }
  check_plan(sc, *best, total_irs);
  return *best;
}

}  // namespace irsplan
