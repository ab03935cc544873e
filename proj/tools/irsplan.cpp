// irsplan: coverage study, ring planning, throughput sweeps and Monte Carlo
// validation from one YAML config.
#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "irsplan/report.hpp"

namespace fs = std::filesystem;
using namespace irsplan;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_coverage(const ExperimentConfig& cfg, const fs::path& out) {
  const auto& radio = cfg.scenario.radio;
  const auto& cov = cfg.coverage;
  const double closed = coverage_range_direct(radio, cov.power, cov.snr_threshold);
  const auto bisected = coverage_range(radio, cfg.scenario.irs, cov.power, cov.snr_threshold, std::nullopt);

  std::ostringstream csv;
  csv << csv_preamble(cfg, "coverage");
  csv << "irs_distance_m,range_m,extension_m,unreachable\n";
  csv << "none," << fmt(closed) << ",0,false\n";
  const int steps = static_cast<int>(std::floor((cov.l_stop - cov.l_start) / cov.l_step + 1e-9));
  double min_ext = std::numeric_limits<double>::infinity(), max_ext = -min_ext;
  for (int s = 0; s <= steps; ++s) {
    const double l = cov.l_start + s * cov.l_step;
    const auto r = coverage_range(radio, cfg.scenario.irs, cov.power, cov.snr_threshold, l);
    const double ext = r.range - closed;
    min_ext = std::min(min_ext, ext);
    max_ext = std::max(max_ext, ext);
    csv << fmt(l) << "," << fmt(r.range) << "," << fmt(ext) << "," << (r.unreachable ? "true" : "false") << "\n";
  }
  write_file((out / "coverage.csv").string(), csv.str());

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "coverage";
  j["baseline_range_m"] = closed;
  j["baseline_range_bisection_m"] = bisected.range;
  j["points"] = steps + 1;
  j["min_extension_m"] = min_ext;
  j["max_extension_m"] = max_ext;
  j["config"] = config_json(cfg);
  write_file((out / "coverage.json").string(), j.dump(2) + "\n");
  std::cout << "baseline r* = " << closed << " m; " << steps + 1 << " IRS distances written to "
            << (out / "coverage.csv").string() << "\n";
  return kExitOk;
}

PlanResult make_plan(const ExperimentConfig& cfg, const std::string& method) {
  const auto& req = cfg.plan;
  if (method == "algorithm1") return algorithm1(cfg.scenario, req.irs_count, req.max_rings, cfg.grid.quadrature);
  SearchGrid g = cfg.grid;
  g.max_rings = std::max(g.max_rings, req.rings);
  return LineSearch(cfg.scenario, req.irs_count, g).solve(req.irs_count, req.rings);
}

int run_plan(const ExperimentConfig& cfg, const fs::path& out) {
  const PlanResult res = make_plan(cfg, cfg.plan.method);
  const Baselines base = ap_baselines(cfg.scenario);
  write_file((out / "plan.json").string(), plan_json(cfg, res, base).dump(2) + "\n");
  write_file((out / "rings.csv").string(), ring_table_csv(cfg, res));
  std::cout << res.method << ": common throughput " << res.throughput << " bps/Hz ("
            << 100.0 * (res.throughput / base.equal_power.throughput - 1.0) << "% over AP-only equal power, "
            << 100.0 * (res.throughput / base.cipc.throughput - 1.0) << "% over AP-only CIPC)\n";
  return kExitOk;
}

int run_sweep(const ExperimentConfig& cfg, const fs::path& out) {
  const auto& sw = cfg.sweep;
  const Scenario& sc = cfg.scenario;
  const Baselines base = ap_baselines(sc);
  auto wants = [&](const std::string& m) { return std::find(sw.methods.begin(), sw.methods.end(), m) != sw.methods.end(); };
  const bool irs_bench = wants("irs-equal-power") || wants("irs-mean-cipc");
  const bool need_ls = wants("line-search") || (irs_bench && sw.benchmark_placement == "line-search");
  const bool need_a1 = wants("algorithm1") || (irs_bench && sw.benchmark_placement == "algorithm1");

  int max_m = 0;
  for (int m : sw.irs_counts) max_m = std::max(max_m, m);
  std::optional<LineSearch> ls;
  if (need_ls && max_m > 0) {
    SearchGrid g = cfg.grid;
    g.max_rings = std::max(g.max_rings, cfg.plan.rings);
    ls.emplace(sc, max_m, g);
  }

  std::ostringstream csv;
  csv << csv_preamble(cfg, "sweep");
  csv << "irs_count,method,throughput_bps_hz,gain_over_ap_equal_power,gain_over_ap_cipc\n";
  auto row = [&](int m, const std::string& method, double nu) {
    csv << m << "," << method << "," << fmt(nu) << "," << fmt(nu / base.equal_power.throughput - 1.0) << ","
        << fmt(nu / base.cipc.throughput - 1.0) << "\n";
  };
  for (int m : sw.irs_counts) {
    if (wants("ap-equal-power")) row(m, "ap-equal-power", base.equal_power.throughput);
    if (wants("ap-cipc")) row(m, "ap-cipc", base.cipc.throughput);
    if (m == 0) continue;
    std::optional<PlanResult> p_ls, p_a1;
    if (need_ls) p_ls = ls->solve(m, cfg.plan.rings);
    if (need_a1) p_a1 = algorithm1(sc, m, cfg.plan.max_rings, cfg.grid.quadrature);
    if (wants("line-search")) row(m, "line-search", p_ls->throughput);
    if (wants("algorithm1")) row(m, "algorithm1", p_a1->throughput);
    const PlanResult& placed = sw.benchmark_placement == "line-search" ? *(p_ls ? p_ls : p_a1) : *(p_a1 ? p_a1 : p_ls);
    if (wants("irs-equal-power"))
      row(m, "irs-equal-power", benchmark_irs_equal_power(sc.radio, sc.cell, sc.irs, placed.plan, sc.min_nop, cfg.benchmark).throughput);
    if (wants("irs-mean-cipc"))
      row(m, "irs-mean-cipc", benchmark_irs_mean_cipc(sc.radio, sc.cell, sc.irs, placed.plan, sc.min_nop, cfg.benchmark).throughput);
  }
  write_file((out / "sweep.csv").string(), csv.str());
  std::cout << "sweep over " << sw.irs_counts.size() << " IRS counts written to " << (out / "sweep.csv").string()
            << "\n";
  return kExitOk;
}

int run_validate(const ExperimentConfig& cfg, const fs::path& out, const std::string& plan_path) {
  std::ifstream in(plan_path);
  if (!in) throw ConfigError("cannot read plan file " + plan_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(plan_path + ": " + e.what());
  }
  const PlanResult plan = plan_from_json(doc, cfg);
  const ValidationReport rep = validate_plan_mc(cfg.scenario, plan, cfg.mc);
  write_file((out / "validation.json").string(), validation_json(cfg, rep).dump(2) + "\n");
  std::cout << "analytical " << rep.analytical.throughput << " bps/Hz, MC " << rep.mc.min_throughput << " +/- "
            << rep.mc.half_width << " (" << (rep.within_interval ? "inside" : "outside") << " the 95% interval)\n";
  return kExitOk;
}

void write_error(const fs::path& out, const std::string& name, const ordered_json& j) {
  try {
    write_file((out / name).string(), j.dump(2) + "\n");
  } catch (...) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS ring placement and power control planner"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string method;
  bool full_scale = false;
  std::string plan_path;

  app.add_option("--config", config_path, "YAML experiment config")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config key, key=value (repeatable)");
  app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--method", method, "Planner (plan) or comma-separated method list (sweep)");
  app.add_flag("--full-scale", full_scale, "1000 topologies x 1e6 fading draws");

  auto* cov = app.add_subcommand("coverage", "AP coverage range versus AP-IRS distance");
  auto* plan = app.add_subcommand("plan", "Ring placement and power split for one IRS count");
  auto* sweep = app.add_subcommand("sweep", "Common throughput versus IRS count per method");
  auto* val = app.add_subcommand("validate", "Monte Carlo check of a plan file");
  val->add_option("--plan", plan_path, "plan.json written by the plan command")->required();
  for (auto* sub : {cov, plan, sweep, val}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const fs::path out(out_dir);
  const std::string command = app.get_subcommands().front()->get_name();
  const std::string started = utc_now();
  int code = kExitOk;
  try {
    fs::create_directories(out);
    if (!method.empty()) overrides.push_back((command == "sweep" ? "sweep.methods=" : "plan.method=") + method);
    if (seed) overrides.push_back("mc.seed=" + std::to_string(*seed));
    if (full_scale) {
      overrides.push_back("mc.topologies=1000");
      overrides.push_back("mc.fading_draws=1000000");
      overrides.push_back("mc.pool_size=1048576");
    }
    const ExperimentConfig cfg = load_config(config_path, overrides);
    if (command == "coverage") code = run_coverage(cfg, out);
    if (command == "plan") code = run_plan(cfg, out);
    if (command == "sweep") code = run_sweep(cfg, out);
    if (command == "validate") code = run_validate(cfg, out, plan_path);
  } catch (const InfeasibleError& e) {
    ordered_json j{{"schema_version", kSchemaVersion}, {"kind", "infeasible"}, {"message", e.what()},
                   {"binding_constraints", e.binding()}};
    std::cerr << "infeasible: " << e.what() << "\n";
    write_error(out, "infeasible.json", j);
    code = kExitInfeasible;
  } catch (const std::exception& e) {
    ordered_json j{{"schema_version", kSchemaVersion}, {"kind", "error"}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
    write_error(out, "error.json", j);
    code = kExitError;
  }

  ordered_json meta{{"command", command}, {"started_utc", started}, {"finished_utc", utc_now()}, {"exit_code", code}};
  meta["argv"] = std::vector<std::string>(argv, argv + argc);
  write_error(out, command + ".meta.json", meta);
  return code;
}
