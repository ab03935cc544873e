#include "irsplan/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace irsplan {

namespace {

enum class Dim { plain, ratio, power, psd, energy, frequency, time, length };

struct Unit {
  const char* name;
  Dim dim;
  double (*to_si)(double);
};

const Unit kUnits[] = {
    {"dB", Dim::ratio, [](double x) { return std::pow(10.0, x / 10.0); }},
    {"dBm", Dim::power, [](double x) { return std::pow(10.0, (x - 30.0) / 10.0); }},
    {"dBm/Hz", Dim::psd, [](double x) { return std::pow(10.0, (x - 30.0) / 10.0); }},
    {"W", Dim::power, [](double x) { return x; }},
    {"mW", Dim::power, [](double x) { return x * 1e-3; }},
    {"W/Hz", Dim::psd, [](double x) { return x; }},
    {"J", Dim::energy, [](double x) { return x; }},
    {"mJ", Dim::energy, [](double x) { return x * 1e-3; }},
    {"Hz", Dim::frequency, [](double x) { return x; }},
    {"kHz", Dim::frequency, [](double x) { return x * 1e3; }},
    {"MHz", Dim::frequency, [](double x) { return x * 1e6; }},
    {"GHz", Dim::frequency, [](double x) { return x * 1e9; }},
    {"s", Dim::time, [](double x) { return x; }},
    {"ms", Dim::time, [](double x) { return x * 1e-3; }},
    {"us", Dim::time, [](double x) { return x * 1e-6; }},
    {"m", Dim::length, [](double x) { return x; }},
    {"km", Dim::length, [](double x) { return x * 1e3; }},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::plain: return "a plain number";
    case Dim::ratio: return "a ratio";
    case Dim::power: return "a power";
    case Dim::psd: return "a power density";
    case Dim::energy: return "an energy";
    case Dim::frequency: return "a frequency";
    case Dim::time: return "a duration";
    case Dim::length: return "a length";
  }
  return "?";
}

double parse_with_dim(const std::string& text, const Dim* want) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || !std::isfinite(x)) throw ConfigError("'" + text + "' is not a number");
  std::string unit(end);
  unit.erase(0, unit.find_first_not_of(" \t"));
  unit.erase(unit.find_last_not_of(" \t") + 1);
  if (unit.empty()) return x;
  for (const Unit& u : kUnits) {
    if (unit != u.name) continue;
    if (want && *want != u.dim)
      throw ConfigError("unit '" + unit + "' does not fit, expected " + dim_name(*want));
    return u.to_si(x);
  }
  throw ConfigError("unknown unit '" + unit + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out + "]";
}

double num(const YAML::Node& n, Dim d) {
  if (!n.IsScalar()) throw ConfigError("expected a scalar");
  return parse_with_dim(n.Scalar(), &d);
}

long long integer(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected an integer");
  const std::string& s = n.Scalar();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || x != std::floor(x) || std::abs(x) > 9.0e15)
    throw ConfigError("'" + s + "' is not an integer");
  return static_cast<long long>(x);
}

bool boolean(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected true or false");
  const std::string& s = n.Scalar();
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("'" + s + "' is not a boolean");
}

std::string text(const YAML::Node& n) {
  if (!n.IsScalar()) throw ConfigError("expected a string");
  return n.Scalar();
}

std::vector<std::string> text_list(const YAML::Node& n) {
  if (n.IsScalar()) {  // "a,b,c" from the command line
    std::vector<std::string> out;
    std::stringstream ss(n.Scalar());
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(item);
    return out;
  }
  if (!n.IsSequence()) throw ConfigError("expected a list");
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(text(item));
  return out;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const YAML::Node&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define NUM_FIELD(key, member, dim)                                                   \
  Field {                                                                              \
    key, [](ExperimentConfig& c, const YAML::Node& n) { c.member = num(n, dim); },     \
        [](const ExperimentConfig& c) { return fmt(c.member); }                        \
  }
#define INT_FIELD(key, member, type)                                                                 \
  Field {                                                                                             \
    key, [](ExperimentConfig& c, const YAML::Node& n) { c.member = static_cast<type>(integer(n)); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                            \
  }
#define BOOL_FIELD(key, member)                                                    \
  Field {                                                                           \
    key, [](ExperimentConfig& c, const YAML::Node& n) { c.member = boolean(n); },   \
        [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }
#define TEXT_FIELD(key, member)                                                 \
  Field {                                                                        \
    key, [](ExperimentConfig& c, const YAML::Node& n) { c.member = text(n); },   \
        [](const ExperimentConfig& c) { return c.member; }                       \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      NUM_FIELD("radio.carrier", scenario.radio.carrier_hz, Dim::frequency),
      NUM_FIELD("radio.bandwidth", scenario.radio.bandwidth_hz, Dim::frequency),
      INT_FIELD("radio.subbands", scenario.radio.subbands, int),
      INT_FIELD("radio.slots", scenario.radio.slots, int),
      NUM_FIELD("radio.frame", scenario.radio.frame_s, Dim::time),
      NUM_FIELD("radio.noise_density", scenario.radio.noise_psd, Dim::psd),
      NUM_FIELD("radio.energy_budget", scenario.radio.energy_budget, Dim::energy),
      NUM_FIELD("radio.pathloss_exponent", scenario.radio.pathloss_exponent, Dim::plain),
      NUM_FIELD("radio.ap_height", scenario.radio.ap_height, Dim::length),
      NUM_FIELD("radio.irs_height", scenario.radio.irs_height, Dim::length),
      NUM_FIELD("cell.radius", scenario.cell.radius, Dim::length),
      INT_FIELD("cell.users", scenario.cell.users, int),
      NUM_FIELD("cell.near_ap_radius", scenario.cell.near_ap_radius, Dim::length),
      INT_FIELD("cell.near_ap_max", scenario.cell.near_ap_max, int),
      NUM_FIELD("cell.max_users_per_irs", scenario.cell.max_users_per_irs, Dim::plain),
      INT_FIELD("irs.elements", scenario.irs.elements, int),
      NUM_FIELD("outage.min_nop", outage.min_nop, Dim::plain),
      NUM_FIELD("outage.rate_threshold", outage.rate_threshold, Dim::plain),
      NUM_FIELD("search.radius_step", grid.radius_step, Dim::length),
      NUM_FIELD("search.rho_step", grid.rho_step, Dim::plain),
      INT_FIELD("search.max_rings", grid.max_rings, int),
      BOOL_FIELD("search.search_outer_radius", grid.search_outer_radius),
      INT_FIELD("search.quadrature_points", grid.quadrature.points, int),
      NUM_FIELD("search.quadrature_rel_tol", grid.quadrature.rel_tol, Dim::plain),
      INT_FIELD("mc.topologies", mc.n_topologies, int),
      INT_FIELD("mc.fading_draws", mc.n_fading, std::int64_t),
      INT_FIELD("mc.seed", mc.seed, std::uint64_t),
      Field{"mc.element_draws",
            [](ExperimentConfig& c, const YAML::Node& n) {
              const std::string s = text(n);
              if (s == "exact")
                c.mc.element_draws = ElementDraws::exact;
              else if (s == "gaussian-surrogate")
                c.mc.element_draws = ElementDraws::gaussian_surrogate;
              else
                throw ConfigError("'" + s + "' is not exact or gaussian-surrogate");
            },
            [](const ExperimentConfig& c) {
              return std::string(c.mc.element_draws == ElementDraws::exact ? "exact" : "gaussian-surrogate");
            }},
      INT_FIELD("mc.pool_size", mc.pool_size, std::int64_t),
      BOOL_FIELD("mc.parallel", mc.parallel),
      NUM_FIELD("coverage.power", coverage.power, Dim::power),
      NUM_FIELD("coverage.snr_threshold", coverage.snr_threshold, Dim::ratio),
      NUM_FIELD("coverage.l_start", coverage.l_start, Dim::length),
      NUM_FIELD("coverage.l_stop", coverage.l_stop, Dim::length),
      NUM_FIELD("coverage.l_step", coverage.l_step, Dim::length),
      TEXT_FIELD("plan.method", plan.method),
      INT_FIELD("plan.irs_count", plan.irs_count, int),
      INT_FIELD("plan.rings", plan.rings, int),
      INT_FIELD("plan.max_rings", plan.max_rings, int),
      Field{"sweep.irs_counts",
            [](ExperimentConfig& c, const YAML::Node& n) {
              c.sweep.irs_counts.clear();
              for (const auto& s : text_list(n)) c.sweep.irs_counts.push_back(static_cast<int>(integer(YAML::Node(s))));
            },
            [](const ExperimentConfig& c) {
              std::vector<std::string> v;
              for (int m : c.sweep.irs_counts) v.push_back(std::to_string(m));
              return join(v);
            }},
      Field{"sweep.methods",
            [](ExperimentConfig& c, const YAML::Node& n) { c.sweep.methods = text_list(n); },
            [](const ExperimentConfig& c) { return join(c.sweep.methods); }},
      TEXT_FIELD("sweep.benchmark_placement", sweep.benchmark_placement),
      INT_FIELD("benchmark.radial", benchmark.radial, int),
      INT_FIELD("benchmark.angular", benchmark.angular, int),
  };
  return table;
}

#undef NUM_FIELD
#undef INT_FIELD
#undef BOOL_FIELD
#undef TEXT_FIELD

const Field* find_field(const std::string& key) {
  for (const Field& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

void apply(ExperimentConfig& cfg, const std::string& key, const YAML::Node& node, const std::string& where) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError(where + ": unknown config key '" + key + "'");
  try {
    f->set(cfg, node);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + key + ": " + e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + ": " + key + ": " + e.what());
  }
}

void walk(ExperimentConfig& cfg, const YAML::Node& node, const std::string& prefix, const std::string& path) {
  for (const auto& item : node) {
    const std::string name = item.first.as<std::string>();
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    const YAML::Node& value = item.second;
    if (value.IsMap()) {
      walk(cfg, value, key, path);
    } else {
      const std::string where = path + ":" + std::to_string(value.Mark().line + 1);
      apply(cfg, key, value, where);
    }
  }
}

}  // namespace

double parse_quantity(const std::string& text) { return parse_with_dim(text, nullptr); }

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    outage.validate();
    grid.validate();
    mc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (std::abs(scenario.min_nop - outage.min_nop) > 0.0)
    throw ConfigError("invalid config: scenario and outage NOP targets differ");
  if (!(coverage.power > 0.0 && coverage.snr_threshold > 0.0))
    throw ConfigError("invalid config: coverage power and threshold must be > 0");
  if (!(coverage.l_step > 0.0 && coverage.l_start >= 0.0 && coverage.l_stop >= coverage.l_start))
    throw ConfigError("invalid config: coverage sweep needs 0 <= l_start <= l_stop and l_step > 0");
  if (plan.method != "line-search" && plan.method != "algorithm1")
    throw ConfigError("invalid config: plan.method must be line-search or algorithm1");
  if (plan.irs_count < 1 || plan.rings < 1 || plan.max_rings < 1)
    throw ConfigError("invalid config: plan needs irs_count, rings and max_rings >= 1");
  for (int m : sweep.irs_counts)
    if (m < 0) throw ConfigError("invalid config: sweep IRS counts must be >= 0");
  static const char* known[] = {"ap-equal-power", "ap-cipc", "line-search", "algorithm1", "irs-equal-power",
                                "irs-mean-cipc"};
  for (const auto& m : sweep.methods) {
    bool ok = false;
    for (const char* k : known) ok = ok || m == k;
    if (!ok) throw ConfigError("invalid config: unknown sweep method '" + m + "'");
  }
  if (sweep.benchmark_placement != "line-search" && sweep.benchmark_placement != "algorithm1")
    throw ConfigError("invalid config: sweep.benchmark_placement must be line-search or algorithm1");
  if (benchmark.radial < 2 || benchmark.angular < 2)
    throw ConfigError("invalid config: benchmark grid needs at least 2 points per axis");
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    YAML::Node root;
    try {
      root = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (root.IsMap())
      walk(cfg, root, "", path);
    else if (!root.IsNull())
      throw ConfigError(path + ": top level must be a mapping");
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + ov + ": expected key=value");
    YAML::Node node;
    try {
      node = YAML::Load(ov.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      throw ConfigError("--set " + ov + ": " + e.what());
    }
    apply(cfg, ov.substr(0, eq), node, "--set");
  }
  // One NOP target drives both the planner and the outage spec.
  cfg.scenario.min_nop = cfg.outage.min_nop;
  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> resolved_entries(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const Field& f : fields()) out[f.key] = f.get(cfg);
  return out;
}

}  // namespace irsplan
