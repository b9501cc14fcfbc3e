#include "aevplan/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "aevplan/error.hpp"

namespace aevplan {
namespace {

const std::vector<std::string> kKeys = {
    "network",
    "demands",
    "horizon",
    "mode",
    "strategy",
    "output_dir",
    "gravity.daily_total",
    "gravity.beta",
    "gravity.peak_hour",
    "gravity.peak_multiplier",
    "gravity.profile",
    "vehicle.battery_kwh",
    "vehicle.reserve_kwh",
    "vehicle.efficiency_kwh_per_km",
    "vehicle.speed_kmh",
    "vehicle.range_km",
    "charger.power_kw",
    "charger.efficiency",
    "charger.lifetime_years",
    "costs.aev_cost",
    "costs.charger_cost",
    "costs.time_cost",
    "costs.maintenance_cost",
    "costs.discount_rate",
    "costs.capital_recovery",
    "costs.charger_margin",
    "paths.k",
    "paths.gap",
    "relocation.window_hours",
    "solver.mip_rel_gap",
    "solver.time_limit_s",
    "solver.node_limit",
    "solver.warmup_node_limit",
};

bool known(const std::string& key) { return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end(); }

std::string leaf_text(const YAML::Node& node) {
  if (node.IsScalar()) return node.Scalar();
  YAML::Emitter e;
  e << YAML::Flow << node;
  return e.c_str();
}

void flatten(const YAML::Node& node, const std::string& prefix, std::map<std::string, std::string>& out,
             const std::string& source) {
  for (const auto& item : node) {
    const std::string key = prefix.empty() ? item.first.as<std::string>() : prefix + "." + item.first.as<std::string>();
    if (item.second.IsMap()) {
      flatten(item.second, key, out, source);
      continue;
    }
    if (!known(key)) {
      throw ParseError(source, static_cast<std::size_t>(item.first.Mark().line + 1), "unknown key '" + key + "'");
    }
    out[key] = leaf_text(item.second);
  }
}

class Reader {
 public:
  explicit Reader(const ScenarioConfig& c) : c_(c) {}

  bool has(const std::string& key) const { return c_.has(key); }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  T as(const std::string& key) const {
    const std::string& text = c_.values().at(key);
    try {
      return YAML::Load(text).as<T>();
    } catch (const YAML::Exception&) {
      throw InputError("invalid value '" + text + "' for " + key);
    }
  }

  std::filesystem::path file(const std::string& key) const {
    std::filesystem::path p = as<std::string>(key);
    return p.is_absolute() ? p : c_.base_dir() / p;
  }

 private:
  const ScenarioConfig& c_;
};

}  // namespace

std::span<const std::string> ScenarioConfig::known_keys() { return kKeys; }

ScenarioConfig ScenarioConfig::parse(const std::string& yaml_text, const std::filesystem::path& base_dir,
                                     const std::string& source) {
  ScenarioConfig c;
  c.base_dir_ = base_dir;
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ParseError(source, 1, "scenario must be a mapping");
  flatten(root, "", c.values_, source);
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
               path.string());
}

void ScenarioConfig::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw InputError("unknown scenario key '" + key + "'");
  values_[key] = value;
}

void ScenarioConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

Scenario resolve(const ScenarioConfig& config) {
  const Reader r(config);
  Scenario s;
  if (!r.has("network")) throw InputError("scenario needs a network file");
  s.network_file = r.file("network");
  if (r.has("demands")) s.demand_file = r.file("demands");

  const bool any_gravity = std::any_of(config.values().begin(), config.values().end(),
                                       [](const auto& kv) { return kv.first.rfind("gravity.", 0) == 0; });
  if (any_gravity) {
    if (s.demand_file) throw InputError("scenario sets both a demand file and gravity settings");
    if (!r.has("gravity.daily_total")) throw InputError("gravity.daily_total is required for gravity demand");
    GravityConfig g;
    g.daily_total = r.as<double>("gravity.daily_total");
    g.beta = r.get("gravity.beta", g.beta);
    g.peak_hour = r.get("gravity.peak_hour", g.peak_hour);
    g.peak_multiplier = r.get("gravity.peak_multiplier", g.peak_multiplier);
    g.profile = r.get("gravity.profile", g.profile);
    s.gravity = g;
  }

  s.horizon = r.get("horizon", s.horizon);
  if (r.has("mode")) s.mode = parse_mode(r.as<std::string>("mode"));
  if (r.has("strategy")) s.strategy = parse_strategy(r.as<std::string>("strategy"));
  if (r.has("output_dir")) s.output_dir = r.file("output_dir");

  s.vehicle.battery_kwh = r.get("vehicle.battery_kwh", s.vehicle.battery_kwh);
  s.vehicle.reserve_kwh = r.get("vehicle.reserve_kwh", s.vehicle.reserve_kwh);
  s.vehicle.efficiency_kwh_per_km =
      r.get("vehicle.efficiency_kwh_per_km", efficiency_for_battery(s.vehicle.battery_kwh));
  s.vehicle.speed_kmh = r.get("vehicle.speed_kmh", s.vehicle.speed_kmh);
  if (r.has("vehicle.range_km")) s.range_km = r.as<double>("vehicle.range_km");

  s.charger.power_kw = r.get("charger.power_kw", s.charger.power_kw);
  s.charger.efficiency = r.get("charger.efficiency", s.charger.efficiency);
  s.charger.lifetime_years = r.get("charger.lifetime_years", s.charger.lifetime_years);
  s.vehicle.validate();
  s.charger.validate();

  const double rate = r.get("costs.discount_rate", 0.08);
  const DerivedParameters derived = derive_unit_costs(s.vehicle.battery_kwh, s.charger, rate, s.charger.lifetime_years);
  s.costs = derived.costs;
  s.costs.aev_cost = r.get("costs.aev_cost", s.costs.aev_cost);
  s.costs.charger_cost = r.get("costs.charger_cost", s.costs.charger_cost);
  s.costs.time_cost = r.get("costs.time_cost", s.costs.time_cost);
  s.costs.maintenance_cost = r.get("costs.maintenance_cost", s.costs.maintenance_cost);
  s.costs.capital_recovery = r.get("costs.capital_recovery", s.costs.capital_recovery);
  s.costs.charger_margin = r.get("costs.charger_margin", s.costs.charger_margin);
  s.costs.validate();

  s.k = r.get("paths.k", s.k);
  s.gap = r.get("paths.gap", s.gap);
  s.relocation_window_hours = r.get("relocation.window_hours", s.relocation_window_hours);
  s.solver.mip_relative_gap = r.get("solver.mip_rel_gap", s.solver.mip_relative_gap);
  s.solver.time_limit_seconds = r.get("solver.time_limit_s", s.solver.time_limit_seconds);
  s.solver.node_limit = r.get("solver.node_limit", s.solver.node_limit);
  s.warmup_node_limit = r.get("solver.warmup_node_limit", s.warmup_node_limit);

  if (s.horizon < 1) throw InputError("horizon must be >= 1");
  if (s.k < 1) throw InputError("paths.k must be >= 1");
  if (!(s.gap >= 0.0)) throw InputError("paths.gap must be >= 0");
  if (s.relocation_window_hours < 0 || s.relocation_window_hours > s.horizon) {
    throw InputError("relocation.window_hours must be within [0, horizon]");
  }
  if (s.range_km && !(*s.range_km > 0.0)) throw InputError("vehicle.range_km must be > 0");
  if (s.warmup_node_limit < 1) throw InputError("solver.warmup_node_limit must be >= 1");
  s.solver.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return resolve(ScenarioConfig::load(path)); }

}  // namespace aevplan
