#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aevplan/cli.hpp"
#include "aevplan/error.hpp"
#include "aevplan/harness.hpp"

namespace py = pybind11;
using namespace aevplan;

namespace {

ScenarioConfig config_for(const std::string& path, const std::vector<std::string>& overrides) {
  ScenarioConfig c = ScenarioConfig::load(path);
  for (const std::string& s : overrides) c.set_assignment(s);
  return c;
}

py::dict costs_dict(const CostBreakdown& c) {
  py::dict d;
  d["investment"] = c.investment;
  d["driving_time"] = c.driving_time;
  d["charging_time"] = c.charging_time;
  d["electricity"] = c.electricity;
  d["maintenance"] = c.maintenance;
  d["total"] = c.total;
  return d;
}

py::list expand(const std::string& network_path, double range_km) {
  const Network net = load_network(network_path);
  const ExpandedNetwork ex = expand_network(net, range_km);
  py::list out;
  for (const ExpandedArc& a : ex.arcs()) {
    std::vector<std::string> witness;
    for (NodeId n : a.witness_path) witness.push_back(net.name(n));
    out.append(py::make_tuple(net.name(a.tail), net.name(a.head), a.length_km, a.is_original, witness));
  }
  return out;
}

py::dict unit_costs(double battery_kwh, double power_kw, double rate, double years) {
  ChargerSpec charger;
  charger.power_kw = power_kw;
  charger.lifetime_years = years;
  const DerivedParameters p = derive_unit_costs(battery_kwh, charger, rate, years);
  py::dict d;
  d["aev_cost"] = p.costs.aev_cost;
  d["charger_cost"] = p.costs.charger_cost;
  d["time_cost"] = p.costs.time_cost;
  d["maintenance_cost"] = p.costs.maintenance_cost;
  d["capital_recovery"] = p.costs.capital_recovery;
  d["efficiency_kwh_per_km"] = p.efficiency_kwh_per_km;
  return d;
}

std::string plan_json(const std::string& path, const std::vector<std::string>& overrides) {
  const Scenario s = resolve(config_for(path, overrides));
  const PreparedScenario prepared = prepare(s);
  const RunRecord rec = run_strategy(prepared, s.strategy, s.mode);
  std::ostringstream out;
  write_run_json(out, rec, prepared);
  return out.str();
}

py::list compare(const std::string& path, const std::vector<std::string>& overrides) {
  const PreparedScenario prepared = prepare(resolve(config_for(path, overrides)));
  py::list out;
  for (const RunRecord& r : compare_strategies(prepared)) {
    const ComparisonRow row = comparison_row(r);
    py::dict d;
    d["strategy"] = row.strategy;
    d["mode"] = row.mode;
    d["status"] = row.status;
    d["fleet"] = row.fleet;
    d["chargers"] = row.chargers;
    d["costs"] = costs_dict(row.costs);
    d["lp_bound"] = r.lp_bound;
    d["rounded_objective"] = r.rounded_objective;
    d["objective"] = r.objective;
    out.append(d);
  }
  return out;
}

py::dict export_problem(const std::string& path, const std::vector<std::string>& overrides) {
  const Scenario s = resolve(config_for(path, overrides));
  const PreparedScenario prepared = prepare(s);
  double obj0 = 0.0;
  if (s.strategy == Strategy::Optimal || s.strategy == Strategy::NoRelocation) {
    obj0 = warmup_objective(prepared, s.mode).objective;
  }
  const PathCatalog catalog = build_catalog(prepared, s.strategy, s.mode, obj0);
  const PlanProblem problem = build_problem(
      PlanInputs{prepared.context(), &prepared.demands, &catalog, s.mode, s.strategy, s.relocation_window_hours});
  const LinearProblem& lp = problem.lp;
  std::vector<std::string> names;
  std::vector<double> cost, lower, upper;
  std::vector<bool> integer;
  for (const Variable& v : lp.variables) {
    names.push_back(v.name);
    cost.push_back(v.objective);
    lower.push_back(v.lower);
    upper.push_back(v.upper);
    integer.push_back(v.integer);
  }
  std::vector<std::size_t> rows, cols;
  std::vector<double> vals, rhs;
  std::vector<std::string> senses, row_names;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Constraint& c = lp.constraints[i];
    for (const Term& t : c.terms) {
      rows.push_back(i);
      cols.push_back(t.var);
      vals.push_back(t.coef);
    }
    rhs.push_back(c.rhs);
    senses.push_back(c.sense == Sense::LessEqual ? "<=" : c.sense == Sense::GreaterEqual ? ">=" : "=");
    row_names.push_back(c.name);
  }
  py::dict d;
  d["names"] = names;
  d["cost"] = cost;
  d["lower"] = lower;
  d["upper"] = upper;
  d["integer"] = integer;
  d["rows"] = rows;
  d["cols"] = cols;
  d["vals"] = vals;
  d["rhs"] = rhs;
  d["senses"] = senses;
  d["row_names"] = row_names;
  d["objective_offset"] = lp.objective_offset;
  return d;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_aevplan, m) {
  m.doc() = "Fleet sizing and charging-station planning core";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  m.def("capital_recovery", &capital_recovery, py::arg("rate"), py::arg("years"));
  m.def("derive_unit_costs", &unit_costs, py::arg("battery_kwh"), py::arg("power_kw") = 100.0,
        py::arg("rate") = 0.08, py::arg("years") = 15.0);
  m.def("expand_network", &expand, py::arg("network_path"), py::arg("range_km"),
        "Expanded arcs as (tail, head, length_km, is_original, witness) tuples.");
  m.def("plan_json", &plan_json, py::arg("scenario"), py::arg("overrides") = std::vector<std::string>{});
  m.def("compare", &compare, py::arg("scenario"), py::arg("overrides") = std::vector<std::string>{});
  m.def("export_problem", &export_problem, py::arg("scenario"), py::arg("overrides") = std::vector<std::string>{},
        "Sparse (row, col, value) form of the planning model.");
  m.def("run_cli", &run_cli, py::arg("args"), "Returns (exit_code, stdout, stderr).");
}
