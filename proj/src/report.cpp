#include "irsplan/report.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace irsplan {

using nlohmann::ordered_json;

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : resolved_entries(cfg)) out[k] = v;
  return out;
}

std::string csv_preamble(const ExperimentConfig& cfg, const std::string& kind) {
  std::ostringstream os;
  os << "# kind=" << kind << "\n# schema_version=" << kSchemaVersion << "\n";
  for (const auto& [k, v] : resolved_entries(cfg)) os << "# " << k << "=" << v << "\n";
  return os.str();
}

nlohmann::ordered_json throughput_json(const ThroughputReport& rep) {
  ordered_json j;
  j["scheme"] = rep.scheme;
  j["min_nop"] = rep.min_nop;
  j["snr_threshold"] = rep.snr_threshold;
  j["rate_bps_hz"] = rep.rate;
  j["throughput_bps_hz"] = rep.throughput;
  j["regions"] = ordered_json::array();
  for (const auto& r : rep.regions)
    j["regions"].push_back({{"region", r.region}, {"power_ratio", r.ratio}, {"throughput_bps_hz", r.throughput}});
  return j;
}

Baselines ap_baselines(const Scenario& sc) {
  return {benchmark_equal_power(sc.radio, sc.cell, sc.min_nop), benchmark_cipc(sc.radio, sc.cell, sc.min_nop)};
}

nlohmann::ordered_json plan_json(const ExperimentConfig& cfg, const PlanResult& res, const Baselines& base) {
  const double lambda = cfg.scenario.cell.density();
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "plan";
  j["method"] = res.method;
  j["throughput_bps_hz"] = res.throughput;
  j["snr_threshold"] = res.allocation.snr_threshold;
  j["rate_bps_hz"] = res.allocation.rate;
  j["min_nop"] = cfg.scenario.min_nop;
  j["total_irs"] = res.plan.total_irs();
  j["outer_radius_m"] = res.plan.outer_radius;
  j["ap_only"] = {{"disc_radius_m", res.plan.ap_disc_radius()},
                  {"power_ratio", res.plan.power_ratios.at(0)},
                  {"coefficient_j", res.coefficients.at(0).coefficient}};
  j["rings"] = ordered_json::array();
  for (int i = 0; i < res.plan.ring_count(); ++i) {
    const Ring& r = res.plan.rings[i];
    const double users = lambda * std::numbers::pi * (r.outer * r.outer - r.inner * r.inner);
    j["rings"].push_back({{"ring", i + 1},
                          {"outer_radius_m", r.outer},
                          {"inner_radius_m", r.inner},
                          {"irs", r.irs},
                          {"irs_circle_radius_m", r.irs_radius},
                          {"power_ratio", res.plan.power_ratios.at(i + 1)},
                          {"users_per_irs", r.irs > 0 ? users / r.irs : 0.0},
                          {"coefficient_j", res.coefficients.at(i + 1).coefficient}});
  }
  j["baselines"] = {{"ap-equal-power", throughput_json(base.equal_power)}, {"ap-cipc", throughput_json(base.cipc)}};
  j["gain_over_ap_equal_power"] = res.throughput / base.equal_power.throughput - 1.0;
  j["gain_over_ap_cipc"] = res.throughput / base.cipc.throughput - 1.0;
  j["config"] = config_json(cfg);
  return j;
}

std::string ring_table_csv(const ExperimentConfig& cfg, const PlanResult& res) {
  const double lambda = cfg.scenario.cell.density();
  std::ostringstream os;
  os << csv_preamble(cfg, "ring-table");
  os << "ring,outer_radius_m,inner_radius_m,irs_count,irs_circle_radius_m,power_ratio,users_per_irs,"
        "throughput_bps_hz\n";
  char buf[512];
  std::snprintf(buf, sizeof buf, "0,%.17g,0,0,,%.17g,,%.17g\n", res.plan.ap_disc_radius(), res.plan.power_ratios.at(0),
                res.coefficients.at(0).coefficient > 0.0 ? res.throughput : 0.0);
  os << buf;
  for (int i = 0; i < res.plan.ring_count(); ++i) {
    const Ring& r = res.plan.rings[i];
    const double users = lambda * std::numbers::pi * (r.outer * r.outer - r.inner * r.inner);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", i + 1, r.outer, r.inner, r.irs,
                  r.irs_radius, res.plan.power_ratios.at(i + 1), r.irs > 0 ? users / r.irs : 0.0,
                  res.coefficients.at(i + 1).coefficient > 0.0 ? res.throughput : 0.0);
    os << buf;
  }
  return os.str();
}

PlanResult plan_from_json(const nlohmann::json& doc, const ExperimentConfig& cfg) {
  try {
    if (doc.at("kind").get<std::string>() != "plan") throw ConfigError("plan file: kind is not 'plan'");
    if (doc.at("schema_version").get<int>() != kSchemaVersion)
      throw ConfigError("plan file: unsupported schema_version " + doc.at("schema_version").dump());
    const auto current = resolved_entries(cfg);
    std::vector<std::string> mismatched;
    for (const auto& [k, v] : doc.at("config").items()) {
      const bool relevant = k.rfind("radio.", 0) == 0 || k.rfind("cell.", 0) == 0 || k.rfind("irs.", 0) == 0 ||
                            k == "outage.min_nop";
      if (!relevant) continue;
      const auto it = current.find(k);
      if (it == current.end() || it->second != v.get<std::string>())
        mismatched.push_back(k + " (plan " + v.get<std::string>() + ", config " +
                             (it == current.end() ? std::string("missing") : it->second) + ")");
    }
    if (!mismatched.empty()) {
      std::string msg = "plan file was made under a different config:";
      for (const auto& m : mismatched) msg += " " + m + ";";
      throw ConfigError(msg);
    }
    std::vector<double> inner;
    std::vector<int> counts;
    for (const auto& r : doc.at("rings")) {
      inner.push_back(r.at("inner_radius_m").get<double>());
      counts.push_back(r.at("irs").get<int>());
    }
    RingPlan plan = RingPlan::build(cfg.scenario.cell, doc.at("outer_radius_m").get<double>(), inner, counts);
    const auto violations = validate_plan(cfg.scenario.cell, plan);
    for (const auto& v : violations)
      if (v.constraint != "power ratios") throw ConfigError("plan file: " + v.constraint + ": " + v.detail);
    return evaluate_plan(cfg.scenario, std::move(plan), doc.at("method").get<std::string>(), cfg.grid.quadrature);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("plan file: ") + e.what());
  }
}

nlohmann::ordered_json validation_json(const ExperimentConfig& cfg, const ValidationReport& rep) {
  auto stratum = [](const Stratum& s) {
    return ordered_json{{"label", s.label},
                        {"trials", s.trials},
                        {"successes", s.successes},
                        {"nop", s.nop()},
                        {"half_width", s.half_width()}};
  };
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "validation";
  j["seed"] = cfg.mc.seed;
  j["topologies"] = rep.mc.topologies;
  j["fading_draws"] = cfg.mc.n_fading;
  j["element_draws"] = cfg.mc.element_draws == ElementDraws::exact ? "exact" : "gaussian-surrogate";
  j["analytical"] = throughput_json(rep.analytical);
  j["mc_throughput_bps_hz"] = rep.mc.min_throughput;
  j["mc_half_width"] = rep.mc.half_width;
  j["mc_binding_region"] = rep.mc.binding_region;
  j["throughput_delta"] = rep.throughput_delta;
  j["analytical_within_interval"] = rep.within_interval;
  j["regions"] = ordered_json::array();
  for (std::size_t i = 0; i < rep.mc.regions.size(); ++i) {
    auto s = stratum(rep.mc.regions[i]);
    s["nop_delta"] = rep.region_nop_delta.at(i);
    j["regions"].push_back(s);
  }
  j["deciles"] = ordered_json::array();
  for (const auto& s : rep.mc.deciles) j["deciles"].push_back(stratum(s));
  j["overflow"] = stratum(rep.mc.overflow);
  j["overflow_ues"] = rep.overflow_ues;
  j["overflow_policy"] = rep.overflow_policy;
  j["energy"] = {{"mean_frame_energy_j", rep.mc.mean_frame_energy},
                 {"half_width_j", rep.mc.energy_half_width},
                 {"budget_j", cfg.scenario.radio.energy_budget},
                 {"ratio", rep.energy_ratio}};
  j["config"] = config_json(cfg);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace irsplan
