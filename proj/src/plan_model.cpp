#include "aevplan/plan_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aevplan/error.hpp"

namespace aevplan {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::MinTime: return "mintime";
    case Strategy::MinOperation: return "minoperation";
    case Strategy::NoRelocation: return "norelocation";
    case Strategy::Optimal: return "optimal";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view text) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == text) return s;
  }
  throw InputError("unknown strategy '" + std::string(text) + "' (expected mintime|minoperation|norelocation|optimal)");
}

std::string_view to_string(RowKind kind) {
  switch (kind) {
    case RowKind::Demand: return "demand";
    case RowKind::ParkingBalance: return "parking_balance";
    case RowKind::DayEnd: return "day_end";
    case RowKind::Fleet: return "fleet";
    case RowKind::Charger: return "charger";
  }
  return "unknown";
}

std::size_t PlanProblem::loaded_flow_variable_count() const {
  std::size_t n = 0;
  for (const auto& od : loaded_vars) {
    for (const auto& path : od) n += path.size();
  }
  return n;
}

double PlanSolution::total_chargers() const {
  double s = 0.0;
  for (double y : chargers) s += y;
  return s;
}

int attributed_hour(int departure, double offset_hours, int horizon) {
  const auto whole = static_cast<long>(std::floor(offset_hours + 1e-9));
  return static_cast<int>((departure + whole) % horizon);
}

namespace {

// Names usable in LP files: letters, digits, '_' and '.'.
std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '.';
    if (!ok) c = '_';
  }
  return out;
}

struct RowBuilder {
  LinearProblem& lp;
  std::vector<RowKind>& kinds;

  void add(RowKind kind, std::string name, Sense sense, double rhs, std::vector<Term> terms) {
    lp.add_constraint(Constraint{std::move(name), sense, rhs, std::move(terms)});
    kinds.push_back(kind);
  }
};

// Terms a departing trip contributes to the time-indexed rows.
struct TripTerms {
  std::vector<std::vector<Term>>* departures;  // [node*T + h]
  std::vector<std::vector<Term>>* arrivals;
  std::vector<std::vector<Term>>* driving;     // [h]
  std::map<std::pair<NodeId, int>, std::vector<Term>>* charging;
};

void add_trip(const Path& path, const ExpandedNetwork& net, const PathContext& ctx, double alpha, int hour, int T,
              std::size_t var, const TripTerms& terms) {
  const auto T_sz = static_cast<std::size_t>(T);
  (*terms.departures)[static_cast<std::size_t>(path.origin) * T_sz + static_cast<std::size_t>(hour)].push_back(
      {var, 1.0});
  const int arrive = (hour + path.occupancy_slots) % T;
  (*terms.arrivals)[static_cast<std::size_t>(path.destination) * T_sz + static_cast<std::size_t>(arrive)].push_back(
      {var, 1.0});
  // A trip occupies one vehicle from its departure hour for occupancy_slots hours.
  std::vector<int> busy(T_sz, 0);
  for (int k = 0; k < path.occupancy_slots; ++k) ++busy[static_cast<std::size_t>((hour + k) % T)];
  for (std::size_t h = 0; h < T_sz; ++h) {
    if (busy[h] > 0) (*terms.driving)[h].push_back({var, static_cast<double>(busy[h])});
  }
  for (std::size_t a = 0; a < path.arcs.size(); ++a) {
    const ExpandedArc& arc = net.arc(path.arcs[a]);
    const double charge = arc_times(arc.length_km, ctx.vehicle, ctx.charger).charge_hours;
    if (charge <= 0.0) continue;
    const int h = attributed_hour(hour, path.arrival_offsets_hours[a], T);
    (*terms.charging)[{arc.head, h}].push_back({var, -alpha * charge});
  }
}

}  // namespace

PlanProblem build_problem(const PlanInputs& in) {
  if (in.context.network == nullptr || in.demands == nullptr || in.catalog == nullptr) {
    throw InputError("build_problem: network, demands and catalog are required");
  }
  const ExpandedNetwork& net = in.context.net();
  const DemandSet& demands = *in.demands;
  const int T = demands.horizon();
  if (T < 1) throw InputError("horizon must be >= 1");
  const auto T_sz = static_cast<std::size_t>(T);
  in.context.costs.validate();
  if (in.relocation_window_hours < 0) throw InputError("relocation window must be >= 0");

  PlanProblem P;
  P.horizon = T;
  P.mode = in.mode;
  P.strategy = in.strategy;
  P.costs = in.context.costs;
  P.node_count = net.node_count();
  const Network& base = net.base();
  const CostParams& c = in.context.costs;
  const double zeta = c.capital_recovery;

  for (const DemandEntry& e : demands.entries()) {
    if (static_cast<int>(e.hourly.size()) != T) throw InputError("demand horizon mismatch");
    if (!(e.total() > 0.0)) continue;
    const OdPaths* od = in.catalog->find_loaded(e.origin, e.destination);
    if (od == nullptr || od->paths.empty()) {
      throw InfeasibleError("no loaded path for OD pair " + base.name(e.origin) + "->" + base.name(e.destination));
    }
    P.loaded.push_back(*od);
    P.demand.push_back(e.hourly);
  }
  P.relocation = in.catalog->relocation;

  LinearProblem& lp = P.lp;
  P.fleet_var = lp.add_variable({"x", 0.0, kInfinity, zeta * c.aev_cost, true});
  for (const Node& node : base.nodes()) {
    P.charger_vars.push_back(lp.add_variable({"y_" + sanitize(node.name), 0.0, kInfinity, zeta * c.charger_cost, true}));
  }

  const std::size_t n_nodes = net.node_count();
  std::vector<std::vector<Term>> departures(n_nodes * T_sz), arrivals(n_nodes * T_sz), driving(T_sz);
  std::map<std::pair<NodeId, int>, std::vector<Term>> charging;
  const TripTerms terms{&departures, &arrivals, &driving, &charging};
  const double alpha = c.charger_margin;

  RowBuilder rows{lp, P.row_kinds};
  std::vector<std::pair<std::string, std::vector<Term>>> demand_rows;

  for (std::size_t g = 0; g < P.loaded.size(); ++g) {
    const OdPaths& od = P.loaded[g];
    const std::string tag = sanitize(base.name(od.origin)) + "_" + sanitize(base.name(od.destination));
    auto& vars = P.loaded_vars.emplace_back(od.paths.size());
    for (std::size_t q = 0; q < od.paths.size(); ++q) {
      const Path& path = od.paths[q];
      for (int h = 0; h < T; ++h) {
        const std::size_t v = lp.add_variable({"f_" + tag + "_" + std::to_string(q) + "_" + std::to_string(h), 0.0,
                                               kInfinity, 365.0 * path.cost(in.mode), false});
        vars[q].push_back(v);
        add_trip(path, net, in.context, alpha, h, T, v, terms);
      }
    }
  }

  const bool windowed = in.strategy == Strategy::NoRelocation;
  for (const OdPaths& od : P.relocation) {
    const std::string tag = sanitize(base.name(od.origin)) + "_" + sanitize(base.name(od.destination));
    auto& vars = P.relocation_vars.emplace_back(od.paths.size());
    for (std::size_t q = 0; q < od.paths.size(); ++q) {
      const Path& path = od.paths[q];
      for (int h = 0; h < T; ++h) {
        const bool open = !windowed || h >= T - in.relocation_window_hours;
        const std::size_t v = lp.add_variable({"r_" + tag + "_" + std::to_string(q) + "_" + std::to_string(h), 0.0,
                                               open ? kInfinity : 0.0, 365.0 * path.goods_cost, false});
        vars[q].push_back(v);
        add_trip(path, net, in.context, alpha, h, T, v, terms);
      }
    }
  }

  for (const Node& node : base.nodes()) {
    const double cap = node.parking_capacity.value_or(kInfinity);
    auto& vars = P.parking_vars.emplace_back();
    for (int h = 0; h < T; ++h) {
      vars.push_back(lp.add_variable({"p_" + sanitize(node.name) + "_" + std::to_string(h), 0.0, cap, 0.0, false}));
    }
  }
  for (const Node& node : base.nodes()) {
    const double cap = node.parking_capacity.value_or(kInfinity);
    P.initial_parking_vars.push_back(lp.add_variable({"p0_" + sanitize(node.name), 0.0, cap, 0.0, false}));
  }

  // Demand satisfaction per OD pair and hour.
  for (std::size_t g = 0; g < P.loaded.size(); ++g) {
    const OdPaths& od = P.loaded[g];
    const std::string tag = sanitize(base.name(od.origin)) + "_" + sanitize(base.name(od.destination));
    for (int h = 0; h < T; ++h) {
      std::vector<Term> t;
      for (const auto& path_vars : P.loaded_vars[g]) t.push_back({path_vars[static_cast<std::size_t>(h)], 1.0});
      rows.add(RowKind::Demand, "dem_" + tag + "_" + std::to_string(h), Sense::Equal,
               P.demand[g][static_cast<std::size_t>(h)], std::move(t));
    }
  }

  // Parking recursion with the initial stock feeding hour 0.
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const std::string name = sanitize(base.node(static_cast<NodeId>(i)).name);
    for (std::size_t h = 0; h < T_sz; ++h) {
      std::vector<Term> t{{P.parking_vars[i][h], 1.0}};
      t.push_back({h == 0 ? P.initial_parking_vars[i] : P.parking_vars[i][h - 1], -1.0});
      for (const Term& a : arrivals[i * T_sz + h]) t.push_back({a.var, -1.0});
      for (const Term& d : departures[i * T_sz + h]) t.push_back({d.var, 1.0});
      rows.add(RowKind::ParkingBalance, "park_" + name + "_" + std::to_string(h), Sense::Equal, 0.0, std::move(t));
    }
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const std::string name = sanitize(base.node(static_cast<NodeId>(i)).name);
    rows.add(RowKind::DayEnd, "dayend_" + name, Sense::GreaterEqual, 0.0,
             {{P.parking_vars[i][T_sz - 1], 1.0}, {P.initial_parking_vars[i], -1.0}});
  }

  // Fleet covers parked plus on-road vehicles in every hour.
  for (std::size_t h = 0; h < T_sz; ++h) {
    std::vector<Term> t{{P.fleet_var, 1.0}};
    for (std::size_t i = 0; i < n_nodes; ++i) t.push_back({P.parking_vars[i][h], -1.0});
    for (const Term& d : driving[h]) t.push_back({d.var, -d.coef});
    rows.add(RowKind::Fleet, "fleet_" + std::to_string(h), Sense::GreaterEqual, 0.0, std::move(t));
  }

  // Charger workload per node and hour.
  for (auto& [key, t] : charging) {
    const auto node = static_cast<std::size_t>(key.first);
    t.insert(t.begin(), Term{P.charger_vars[node], 1.0});
    rows.add(RowKind::Charger, "chg_" + sanitize(base.node(key.first).name) + "_" + std::to_string(key.second),
             Sense::GreaterEqual, 0.0, std::move(t));
  }
  return P;
}

std::vector<Violation> verify_solution(const PlanProblem& problem, std::span<const double> values, double tol) {
  const LinearProblem& lp = problem.lp;
  if (values.size() != lp.variables.size()) {
    throw InputError("verify_solution: expected " + std::to_string(lp.variables.size()) + " values, got " +
                     std::to_string(values.size()));
  }
  std::vector<Violation> out;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Constraint& row = lp.constraints[i];
    double scale = std::max(1.0, std::abs(row.rhs));
    for (const Term& t : row.terms) scale = std::max(scale, std::abs(t.coef * values[t.var]));
    const double v = lp.row_violation(i, values);
    if (v > tol * scale) out.push_back({row.name, std::string(to_string(problem.row_kinds[i])), v});
  }
  for (std::size_t j = 0; j < lp.variables.size(); ++j) {
    const Variable& var = lp.variables[j];
    const double x = values[j];
    const double below = var.lower - x;
    const double above = x - var.upper;
    if (below > tol * std::max(1.0, std::abs(var.lower))) out.push_back({var.name, "bound", below});
    if (above > tol * std::max(1.0, std::abs(var.upper))) out.push_back({var.name, "bound", above});
    if (var.integer && std::abs(x - std::round(x)) > tol) {
      out.push_back({var.name, "integrality", std::abs(x - std::round(x))});
    }
  }
  return out;
}

PlanSolution decompose(const PlanProblem& problem, std::span<const double> values) {
  if (values.size() != problem.lp.variables.size()) throw InputError("decompose: value count mismatch");
  const int T = problem.horizon;
  const auto T_sz = static_cast<std::size_t>(T);
  PlanSolution s;
  s.fleet = values[problem.fleet_var];
  for (std::size_t v : problem.charger_vars) s.chargers.push_back(values[v]);
  s.driving.assign(T_sz, 0.0);
  s.parked.assign(T_sz, 0.0);

  auto account = [&](const Path& path, std::size_t h, double flow) {
    for (int k = 0; k < path.occupancy_slots; ++k) {
      s.driving[(h + static_cast<std::size_t>(k)) % T_sz] += flow;
    }
  };

  for (std::size_t g = 0; g < problem.loaded.size(); ++g) {
    auto& flows = s.loaded_flows.emplace_back();
    auto& dep = s.departures.emplace_back(T_sz, 0.0);
    auto& arr = s.arrivals.emplace_back(T_sz, 0.0);
    for (std::size_t q = 0; q < problem.loaded_vars[g].size(); ++q) {
      const Path& path = problem.loaded[g].paths[q];
      auto& f = flows.emplace_back();
      for (std::size_t h = 0; h < T_sz; ++h) {
        const double v = values[problem.loaded_vars[g][q][h]];
        f.push_back(v);
        dep[h] += v;
        arr[(h + static_cast<std::size_t>(path.occupancy_slots)) % T_sz] += v;
        account(path, h, v);
      }
    }
  }
  for (std::size_t r = 0; r < problem.relocation.size(); ++r) {
    auto& flows = s.relocation_flows.emplace_back();
    for (std::size_t q = 0; q < problem.relocation_vars[r].size(); ++q) {
      const Path& path = problem.relocation[r].paths[q];
      auto& f = flows.emplace_back();
      for (std::size_t h = 0; h < T_sz; ++h) {
        const double v = values[problem.relocation_vars[r][q][h]];
        f.push_back(v);
        account(path, h, v);
      }
    }
  }
  for (std::size_t i = 0; i < problem.parking_vars.size(); ++i) {
    auto& p = s.parking.emplace_back();
    for (std::size_t h = 0; h < T_sz; ++h) {
      p.push_back(values[problem.parking_vars[i][h]]);
      s.parked[h] += p.back();
    }
    s.initial_parking.push_back(values[problem.initial_parking_vars[i]]);
  }
  s.objective = problem.lp.objective_value(values);
  s.costs = cost_breakdown(problem, s);
  return s;
}

CostBreakdown cost_breakdown(const PlanProblem& problem, const PlanSolution& s) {
  const CostParams& c = problem.costs;
  CostBreakdown b;
  b.investment = c.capital_recovery * (c.aev_cost * s.fleet + c.charger_cost * s.total_chargers());
  const double time_cost = problem.mode == Mode::Passenger ? c.time_cost : 0.0;
  for (std::size_t g = 0; g < problem.loaded.size(); ++g) {
    for (std::size_t q = 0; q < problem.loaded[g].paths.size(); ++q) {
      const Path& path = problem.loaded[g].paths[q];
      double trips = 0.0;
      for (double f : s.loaded_flows[g][q]) trips += f;
      b.driving_time += 365.0 * time_cost * path.drive_hours * trips;
      b.charging_time += 365.0 * time_cost * path.passenger_charge_hours * trips;
      b.electricity += 365.0 * path.electricity_cost * trips;
      b.maintenance += 365.0 * path.maintenance_cost * trips;
    }
  }
  for (std::size_t r = 0; r < problem.relocation.size(); ++r) {
    for (std::size_t q = 0; q < problem.relocation[r].paths.size(); ++q) {
      const Path& path = problem.relocation[r].paths[q];
      double trips = 0.0;
      for (double f : s.relocation_flows[r][q]) trips += f;
      b.electricity += 365.0 * path.electricity_cost * trips;
      b.maintenance += 365.0 * path.maintenance_cost * trips;
    }
  }
  b.total = b.investment + b.driving_time + b.charging_time + b.electricity + b.maintenance +
            problem.lp.objective_offset;
  return b;
}

double conservation_residual(const PlanProblem& problem, std::span<const double> values) {
  double worst = 0.0;
  const auto T_sz = static_cast<std::size_t>(problem.horizon);
  std::vector<double> balance(problem.node_count);
  for (std::size_t g = 0; g < problem.loaded.size(); ++g) {
    const OdPaths& od = problem.loaded[g];
    for (std::size_t h = 0; h < T_sz; ++h) {
      std::fill(balance.begin(), balance.end(), 0.0);
      double total = 0.0;
      for (std::size_t q = 0; q < od.paths.size(); ++q) {
        const double f = values[problem.loaded_vars[g][q][h]];
        const auto& nodes = od.paths[q].nodes;
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
          balance[static_cast<std::size_t>(nodes[k])] -= f;
          balance[static_cast<std::size_t>(nodes[k + 1])] += f;
        }
        total += f;
      }
      // Net inflow is -demand at the origin, +demand at the destination, 0 elsewhere.
      const double demand = problem.demand[g][h];
      for (std::size_t i = 0; i < balance.size(); ++i) {
        double expected = 0.0;
        if (static_cast<NodeId>(i) == od.origin) expected = -demand;
        if (static_cast<NodeId>(i) == od.destination) expected = demand;
        worst = std::max(worst, std::abs(balance[i] - expected));
      }
      worst = std::max(worst, std::abs(total - demand));
    }
  }
  return worst;
}

}  // namespace aevplan
