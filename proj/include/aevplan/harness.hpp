#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aevplan/demand.hpp"
#include "aevplan/network.hpp"
#include "aevplan/path_sets.hpp"
#include "aevplan/plan_model.hpp"
#include "aevplan/scenario.hpp"
#include "aevplan/solver.hpp"

namespace aevplan {

// Scenario with its network expanded and demand materialized.
struct PreparedScenario {
  Scenario scenario;
  ExpandedNetwork network;
  DemandSet demands;
  std::vector<std::pair<NodeId, NodeId>> skipped_pairs;

  PathContext context() const { return PathContext{&network, scenario.vehicle, scenario.charger, scenario.costs}; }
};

// Loads the network and demand, expands for the scenario range.
PreparedScenario prepare(const Scenario& scenario);
DemandSet materialize_demands(const Scenario& scenario, const Network& net,
                              std::vector<std::pair<NodeId, NodeId>>* skipped = nullptr);

struct WarmupResult {
  double objective = 0.0;
  SolveReport report;
  PathCatalog catalog;
};

// Plan restricted to one min-operation path per pair with adjacent relocation.
WarmupResult warmup_objective(const PreparedScenario& prepared, Mode mode);

// Loaded and relocation path sets for a strategy. Optimal and NoRelocation
// enumerate k cheapest paths and prune against `warmup_objective`.
PathCatalog build_catalog(const PreparedScenario& prepared, Strategy strategy, Mode mode, double warmup_objective);

struct RunRecord {
  Strategy strategy = Strategy::Optimal;
  Mode mode = Mode::Passenger;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string message;  // failure reason, empty on success
  double objective = 0.0;
  double lp_bound = 0.0;
  double rounded_objective = 0.0;
  double relative_gap = 0.0;
  std::int64_t nodes = 0;
  double warmup_objective = 0.0;
  CatalogStats catalog;
  std::size_t variables = 0;
  std::size_t constraints = 0;
  std::size_t violations = 0;
  std::optional<PlanSolution> solution;
  std::vector<OdPaths> loaded_paths;      // path sets behind solution->loaded_flows
  std::vector<OdPaths> relocation_paths;  // path sets behind solution->relocation_flows

  bool solved() const { return status == SolveStatus::Optimal; }
  double fleet() const { return solution ? solution->fleet : 0.0; }
  double chargers() const { return solution ? solution->total_chargers() : 0.0; }
};

// expand -> demands -> catalog -> build -> solve -> verify -> breakdown.
// Infeasible or failed runs come back with a status and a message tagged with
// the failing stage instead of throwing; input errors still throw.
RunRecord run_strategy(const PreparedScenario& prepared, Strategy strategy, Mode mode,
                       const WarmupResult* warmup = nullptr);

// Every strategy for both modes; rows ordered strategy-major.
std::vector<RunRecord> compare_strategies(const PreparedScenario& prepared);

struct ComparisonRow {
  std::string strategy;
  std::string mode;
  std::string status;
  double fleet = 0.0;
  double chargers = 0.0;
  CostBreakdown costs;

  bool operator==(const ComparisonRow&) const = default;
};

ComparisonRow comparison_row(const RunRecord& record);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> parse_comparison_csv(std::istream& in);

enum class SweepParameter { ChargerPower, BatteryKwh, SpeedKmh };
std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::ChargerPower;
  std::vector<double> values;  // positive, ascending
  ScenarioConfig base;
};

struct SweepRow {
  double value = 0.0;
  std::string status;
  double fleet = 0.0;
  double chargers = 0.0;
  CostBreakdown costs;

  bool operator==(const SweepRow&) const = default;
};

// Reruns the base scenario's strategy and mode at each value.
std::vector<SweepRow> sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, SweepParameter parameter, const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

// Machine-readable record (JSON) and a short human-readable summary.
void write_run_json(std::ostream& out, const RunRecord& record, const PreparedScenario& prepared);
void write_run_summary(std::ostream& out, const RunRecord& record, const PreparedScenario& prepared);

}  // namespace aevplan
