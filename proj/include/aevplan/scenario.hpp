#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aevplan/cost_model.hpp"
#include "aevplan/plan_model.hpp"
#include "aevplan/solver.hpp"

namespace aevplan {

// Raw scenario settings as dotted keys mapped to YAML scalar or flow-sequence
// text, e.g. "vehicle.battery_kwh" -> "75". Relative file paths resolve
// against base_dir.
class ScenarioConfig {
 public:
  static ScenarioConfig load(const std::filesystem::path& path);
  static ScenarioConfig parse(const std::string& yaml_text, const std::filesystem::path& base_dir = ".",
                              const std::string& source = "<scenario>");

  // Throws InputError for keys outside the schema.
  void set(const std::string& key, const std::string& value);
  // "key=value" form used by --set.
  void set_assignment(const std::string& assignment);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

  static std::span<const std::string> known_keys();

 private:
  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_ = ".";
};

struct GravityConfig {
  double daily_total = 0.0;
  double beta = 2.0;
  int peak_hour = 8;
  double peak_multiplier = 1.0;
  std::vector<double> profile;  // explicit hour weights; overrides peak settings
};

// Fully resolved scenario: defaults filled in and derived parameters
// recomputed from battery size, charger power, discount rate and lifetime
// unless set explicitly.
struct Scenario {
  std::filesystem::path network_file;
  std::optional<std::filesystem::path> demand_file;
  std::optional<GravityConfig> gravity;
  int horizon = 24;
  Mode mode = Mode::Passenger;
  Strategy strategy = Strategy::Optimal;
  VehicleSpec vehicle;
  std::optional<double> range_km;  // explicit expansion range
  ChargerSpec charger;
  CostParams costs;
  int k = 150;
  double gap = 1e-4;
  int relocation_window_hours = 2;
  SolveOptions solver;
  std::int64_t warmup_node_limit = 1'000'000;
  std::optional<std::filesystem::path> output_dir;

  double expansion_range_km() const { return range_km.value_or(vehicle.range_km()); }
};

Scenario resolve(const ScenarioConfig& config);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace aevplan
