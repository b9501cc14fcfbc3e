#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aevplan/cost_model.hpp"
#include "aevplan/demand.hpp"
#include "aevplan/linear_problem.hpp"
#include "aevplan/path_sets.hpp"

namespace aevplan {

enum class Strategy { MinTime, MinOperation, NoRelocation, Optimal };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);
inline constexpr Strategy kAllStrategies[] = {Strategy::MinTime, Strategy::MinOperation, Strategy::NoRelocation,
                                              Strategy::Optimal};

struct PlanInputs {
  PathContext context;
  const DemandSet* demands = nullptr;
  const PathCatalog* catalog = nullptr;
  Mode mode = Mode::Passenger;
  Strategy strategy = Strategy::Optimal;
  // NoRelocation: relocation trips may only depart in the last this-many hours
  // of the day. 0 forbids relocation entirely.
  int relocation_window_hours = 2;
};

enum class RowKind { Demand, ParkingBalance, DayEnd, Fleet, Charger };
std::string_view to_string(RowKind kind);

// Assembled planning MILP and the index maps needed to read a solution back.
struct PlanProblem {
  LinearProblem lp;
  std::vector<RowKind> row_kinds;  // one per lp.constraints entry

  int horizon = 24;
  Mode mode = Mode::Passenger;
  Strategy strategy = Strategy::Optimal;
  CostParams costs;
  std::size_t node_count = 0;

  std::vector<OdPaths> loaded;                    // OD pairs with positive demand
  std::vector<std::vector<double>> demand;        // [od][hour]
  std::vector<OdPaths> relocation;

  std::size_t fleet_var = 0;
  std::vector<std::size_t> charger_vars;                         // [node]
  std::vector<std::vector<std::vector<std::size_t>>> loaded_vars;     // [od][path][hour]
  std::vector<std::vector<std::vector<std::size_t>>> relocation_vars; // [pair][path][hour]
  std::vector<std::vector<std::size_t>> parking_vars;            // [node][hour]
  std::vector<std::size_t> initial_parking_vars;                 // [node]

  std::size_t loaded_flow_variable_count() const;
};

// Throws InfeasibleError when a pair with positive demand has no loaded path,
// InputError when the demand horizon is not positive or inputs are missing.
PlanProblem build_problem(const PlanInputs& inputs);

struct Violation {
  std::string name;  // row or variable name
  std::string kind;  // row kind, "bound" or "integrality"
  double amount = 0.0;
};

// Every row, bound and integrality flag checked at relative tolerance `tol`.
// Throws InputError when `values` does not match the variable count.
std::vector<Violation> verify_solution(const PlanProblem& problem, std::span<const double> values,
                                       double tol = 1e-6);

struct CostBreakdown {
  double investment = 0.0;
  double driving_time = 0.0;
  double charging_time = 0.0;
  double electricity = 0.0;
  double maintenance = 0.0;
  double total = 0.0;

  bool operator==(const CostBreakdown&) const = default;
};

struct PlanSolution {
  double fleet = 0.0;
  std::vector<double> chargers;                                     // [node]
  std::vector<std::vector<std::vector<double>>> loaded_flows;       // [od][path][hour]
  std::vector<std::vector<std::vector<double>>> relocation_flows;   // [pair][path][hour]
  std::vector<std::vector<double>> parking;                         // [node][hour]
  std::vector<double> initial_parking;                              // [node]
  std::vector<std::vector<double>> departures;                      // [od][hour]
  std::vector<std::vector<double>> arrivals;                        // [od][hour]
  std::vector<double> driving;                                      // [hour]
  std::vector<double> parked;                                       // [hour]
  double objective = 0.0;
  CostBreakdown costs;

  double total_chargers() const;
};

PlanSolution decompose(const PlanProblem& problem, std::span<const double> values);

// Annualized cost split; components sum to the objective.
CostBreakdown cost_breakdown(const PlanProblem& problem, const PlanSolution& solution);

// Largest node-balance residual of the arc flows implied by the path flows,
// per OD pair and departure hour.
double conservation_residual(const PlanProblem& problem, std::span<const double> values);

// Hour in which a trip departing `departure` with the given offset lands.
int attributed_hour(int departure, double offset_hours, int horizon);

}  // namespace aevplan
