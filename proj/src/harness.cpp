#include "aevplan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "aevplan/error.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {

DemandSet materialize_demands(const Scenario& s, const Network& net, std::vector<std::pair<NodeId, NodeId>>* skipped) {
  if (s.demand_file) {
    DemandSet d = load_demands(*s.demand_file, net);
    if (d.horizon() != s.horizon) {
      throw InputError("demand file horizon " + std::to_string(d.horizon()) + " differs from scenario horizon " +
                       std::to_string(s.horizon));
    }
    return d;
  }
  if (!s.gravity) throw InputError("scenario needs a demand file or gravity settings");
  const GravityConfig& g = *s.gravity;
  const std::vector<double> profile =
      g.profile.empty() ? peaked_profile(s.horizon, g.peak_hour, g.peak_multiplier) : g.profile;
  if (static_cast<int>(profile.size()) != s.horizon) throw InputError("gravity.profile length differs from horizon");
  GravityDemand gd = gravity_demands(net, g.daily_total, profile, g.beta);
  if (skipped != nullptr) *skipped = gd.skipped_pairs;
  return std::move(gd.demands);
}

PreparedScenario prepare(const Scenario& scenario) {
  PreparedScenario p;
  p.scenario = scenario;
  const Network net = load_network(scenario.network_file);
  p.demands = materialize_demands(scenario, net, &p.skipped_pairs);
  p.network = expand_network(net, scenario.expansion_range_km());
  return p;
}

PathCatalog build_catalog(const PreparedScenario& prepared, Strategy strategy, Mode mode, double warmup_obj) {
  const PathContext ctx = prepared.context();
  const Scenario& s = prepared.scenario;
  const bool enumerate = strategy == Strategy::Optimal || strategy == Strategy::NoRelocation;
  PathCatalog catalog;
  catalog.stats.k = enumerate ? s.k : 1;
  catalog.stats.gap = enumerate ? s.gap : 0.0;
  for (const DemandEntry& e : prepared.demands.entries()) {
    if (!(e.total() > 0.0)) continue;
    std::vector<Path> paths;
    switch (strategy) {
      case Strategy::MinTime:
        paths = k_cheapest_paths(ctx, e.origin, e.destination, 1, mode, PathRanking::OccupancyTime);
        break;
      case Strategy::MinOperation:
        paths = k_cheapest_paths(ctx, e.origin, e.destination, 1, mode);
        break;
      case Strategy::NoRelocation:
      case Strategy::Optimal: {
        const std::vector<Path> candidates = k_cheapest_paths(ctx, e.origin, e.destination, s.k, mode);
        if (!candidates.empty()) {
          catalog.stats.candidate_paths += candidates.size();
          paths = prune_loaded(candidates, warmup_obj, s.gap, e.peak(), ctx, mode).kept;
          catalog.stats.kept_paths += paths.size();
        }
        break;
      }
    }
    if (!enumerate) {
      catalog.stats.candidate_paths += paths.size();
      catalog.stats.kept_paths += paths.size();
    }
    if (!paths.empty()) catalog.loaded.push_back(OdPaths{e.origin, e.destination, std::move(paths)});
  }
  std::sort(catalog.loaded.begin(), catalog.loaded.end(), [](const OdPaths& a, const OdPaths& b) {
    return std::pair(a.origin, a.destination) < std::pair(b.origin, b.destination);
  });
  catalog.relocation = relocation_pathsets(ctx);
  return catalog;
}

namespace {

PlanInputs plan_inputs(const PreparedScenario& prepared, const PathCatalog& catalog, Strategy strategy, Mode mode) {
  PlanInputs in{prepared.context(), &prepared.demands, &catalog, mode, strategy,
                prepared.scenario.relocation_window_hours};
  return in;
}

}  // namespace

WarmupResult warmup_objective(const PreparedScenario& prepared, Mode mode) {
  WarmupResult w;
  w.catalog = build_catalog(prepared, Strategy::MinOperation, mode, 0.0);
  const PlanProblem problem = build_problem(plan_inputs(prepared, w.catalog, Strategy::MinOperation, mode));
  SolveOptions options = prepared.scenario.solver;
  options.node_limit = std::min(options.node_limit, prepared.scenario.warmup_node_limit);
  const SolveResult result = solve_mip(problem.lp, options);
  w.report = result.report;
  if (!result.report.has_solution()) {
    throw InfeasibleError("warm-up plan has no solution (" + std::string(to_string(result.report.status)) + ")");
  }
  w.objective = result.report.objective;
  return w;
}

RunRecord run_strategy(const PreparedScenario& prepared, Strategy strategy, Mode mode, const WarmupResult* warmup) {
  RunRecord rec;
  rec.strategy = strategy;
  rec.mode = mode;
  std::string stage = "warmup";
  try {
    double obj0 = 0.0;
    if (strategy == Strategy::Optimal || strategy == Strategy::NoRelocation) {
      if (warmup != nullptr) {
        obj0 = warmup->objective;
      } else {
        obj0 = warmup_objective(prepared, mode).objective;
      }
    }
    rec.warmup_objective = obj0;
    stage = "catalog";
    const PathCatalog catalog = build_catalog(prepared, strategy, mode, obj0);
    rec.catalog = catalog.stats;
    stage = "build";
    const PlanProblem problem = build_problem(plan_inputs(prepared, catalog, strategy, mode));
    rec.variables = problem.lp.variables.size();
    rec.constraints = problem.lp.constraints.size();

    stage = "solve";
    const SolveResult lp = solve_lp(problem.lp);
    if (lp.report.status == SolveStatus::Optimal) {
      rec.lp_bound = lp.report.objective;
      const RoundingResult rounded = round_up_heuristic(problem.lp, lp.values, lp.report.objective);
      rec.rounded_objective = rounded.feasible ? rounded.objective : kInfinity;
    }
    const SolveResult mip = solve_mip(problem.lp, prepared.scenario.solver);
    rec.status = mip.report.status;
    rec.nodes = mip.report.nodes;
    rec.relative_gap = mip.report.relative_gap;
    if (!mip.report.has_solution()) {
      rec.message = "solve: status " + std::string(to_string(mip.report.status));
      return rec;
    }
    rec.objective = mip.report.objective;
    rec.violations = verify_solution(problem, mip.values).size();
    rec.solution = decompose(problem, mip.values);
    rec.loaded_paths = problem.loaded;
    rec.relocation_paths = problem.relocation;
    if (rec.violations != 0) {
      rec.status = SolveStatus::NumericalFailure;
      rec.message = "verify: " + std::to_string(rec.violations) + " constraint violations in solver output";
    }
  } catch (const InfeasibleError& e) {
    rec.status = SolveStatus::Infeasible;
    rec.message = stage + ": " + e.what();
  }
  return rec;
}

std::vector<RunRecord> compare_strategies(const PreparedScenario& prepared) {
  std::vector<std::optional<WarmupResult>> warm;
  std::vector<std::string> warm_error;
  const Mode modes[] = {Mode::Passenger, Mode::Goods};
  for (Mode m : modes) {
    try {
      warm.push_back(warmup_objective(prepared, m));
      warm_error.emplace_back();
    } catch (const InfeasibleError& e) {
      warm.emplace_back();
      warm_error.emplace_back(e.what());
    }
  }
  std::vector<RunRecord> out;
  for (Strategy s : kAllStrategies) {
    for (std::size_t mi = 0; mi < 2; ++mi) {
      const bool needs_warmup = s == Strategy::Optimal || s == Strategy::NoRelocation;
      if (needs_warmup && !warm[mi]) {
        RunRecord rec;
        rec.strategy = s;
        rec.mode = modes[mi];
        rec.status = SolveStatus::Infeasible;
        rec.message = warm_error[mi];
        out.push_back(std::move(rec));
        continue;
      }
      out.push_back(run_strategy(prepared, s, modes[mi], warm[mi] ? &*warm[mi] : nullptr));
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_costs(std::ostream& out, const CostBreakdown& c) {
  out << format_number(c.investment) << ',' << format_number(c.driving_time) << ','
      << format_number(c.charging_time) << ',' << format_number(c.electricity) << ','
      << format_number(c.maintenance) << ',' << format_number(c.total);
}

CostBreakdown read_costs(const std::vector<std::string>& cells, std::size_t first) {
  CostBreakdown c;
  c.investment = parse_number(cells[first]);
  c.driving_time = parse_number(cells[first + 1]);
  c.charging_time = parse_number(cells[first + 2]);
  c.electricity = parse_number(cells[first + 3]);
  c.maintenance = parse_number(cells[first + 4]);
  c.total = parse_number(cells[first + 5]);
  return c;
}

constexpr const char* kCostHeader = "investment,driving_time,charging_time,electricity,maintenance,total";

}  // namespace

ComparisonRow comparison_row(const RunRecord& record) {
  ComparisonRow row;
  row.strategy = std::string(to_string(record.strategy));
  row.mode = std::string(to_string(record.mode));
  row.status = std::string(to_string(record.status));
  if (record.solution) {
    row.fleet = record.fleet();
    row.chargers = record.chargers();
    row.costs = record.solution->costs;
  }
  return row;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "strategy,mode,status,fleet,chargers," << kCostHeader << '\n';
  for (const ComparisonRow& r : rows) {
    out << r.strategy << ',' << r.mode << ',' << r.status << ',' << format_number(r.fleet) << ','
        << format_number(r.chargers) << ',';
    write_costs(out, r.costs);
    out << '\n';
  }
}

std::vector<ComparisonRow> parse_comparison_csv(std::istream& in) {
  std::vector<ComparisonRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 11) throw ParseError("<comparison>", lineno, "expected 11 columns");
    ComparisonRow r;
    r.strategy = cells[0];
    r.mode = cells[1];
    r.status = cells[2];
    r.fleet = parse_number(cells[3]);
    r.chargers = parse_number(cells[4]);
    r.costs = read_costs(cells, 5);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::ChargerPower: return "charger_power";
    case SweepParameter::BatteryKwh: return "battery_kwh";
    case SweepParameter::SpeedKmh: return "speed_kmh";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  for (SweepParameter p : {SweepParameter::ChargerPower, SweepParameter::BatteryKwh, SweepParameter::SpeedKmh}) {
    if (to_string(p) == text) return p;
  }
  throw InputError("unknown sweep parameter '" + std::string(text) + "' (expected charger_power|battery_kwh|speed_kmh)");
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw InputError("sweep needs at least one value");
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > 0.0)) throw InputError("sweep values must be positive");
    if (i > 0 && !(spec.values[i] > spec.values[i - 1])) throw InputError("sweep values must be ascending");
  }
  const char* key = spec.parameter == SweepParameter::ChargerPower ? "charger.power_kw"
                    : spec.parameter == SweepParameter::BatteryKwh ? "vehicle.battery_kwh"
                                                                   : "vehicle.speed_kmh";
  std::vector<SweepRow> rows;
  for (double v : spec.values) {
    ScenarioConfig config = spec.base;
    config.set(key, format_number(v));
    const Scenario scenario = resolve(config);
    SweepRow row;
    row.value = v;
    try {
      const PreparedScenario prepared = prepare(scenario);
      const RunRecord rec = run_strategy(prepared, scenario.strategy, scenario.mode);
      row.status = std::string(to_string(rec.status));
      if (rec.solution) {
        row.fleet = rec.fleet();
        row.chargers = rec.chargers();
        row.costs = rec.solution->costs;
      }
    } catch (const InfeasibleError&) {
      row.status = std::string(to_string(SolveStatus::Infeasible));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepParameter parameter, const std::vector<SweepRow>& rows) {
  out << to_string(parameter) << ",status,fleet,chargers," << kCostHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_number(r.value) << ',' << r.status << ',' << format_number(r.fleet) << ','
        << format_number(r.chargers) << ',';
    write_costs(out, r.costs);
    out << '\n';
  }
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 10) throw ParseError("<sweep>", lineno, "expected 10 columns");
    SweepRow r;
    r.value = parse_number(cells[0]);
    r.status = cells[1];
    r.fleet = parse_number(cells[2]);
    r.chargers = parse_number(cells[3]);
    r.costs = read_costs(cells, 4);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

nlohmann::ordered_json costs_json(const CostBreakdown& c) {
  return {{"investment", c.investment},   {"driving_time", c.driving_time}, {"charging_time", c.charging_time},
          {"electricity", c.electricity}, {"maintenance", c.maintenance},   {"total", c.total}};
}

nlohmann::ordered_json flows_json(const std::vector<OdPaths>& sets,
                                  const std::vector<std::vector<std::vector<double>>>& flows, const Network& net) {
  auto out = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < sets.size(); ++g) {
    for (std::size_t q = 0; q < sets[g].paths.size(); ++q) {
      for (std::size_t h = 0; h < flows[g][q].size(); ++h) {
        const double f = flows[g][q][h];
        if (std::abs(f) <= 1e-12) continue;
        auto names = nlohmann::ordered_json::array();
        for (NodeId n : sets[g].paths[q].nodes) names.push_back(net.name(n));
        out.push_back({{"path", names}, {"hour", h}, {"flow", f}});
      }
    }
  }
  return out;
}

}  // namespace

void write_run_json(std::ostream& out, const RunRecord& r, const PreparedScenario& prepared) {
  const Network& net = prepared.network.base();
  const auto T = static_cast<std::size_t>(prepared.demands.horizon());
  nlohmann::ordered_json j;
  j["strategy"] = to_string(r.strategy);
  j["mode"] = to_string(r.mode);
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["objective"] = r.objective;
  j["lp_bound"] = r.lp_bound;
  j["rounded_objective"] = r.rounded_objective;
  j["relative_gap"] = r.relative_gap;
  j["nodes"] = r.nodes;
  j["warmup_objective"] = r.warmup_objective;
  j["catalog"] = {{"k", r.catalog.k},
                  {"gap", r.catalog.gap},
                  {"candidate_paths", r.catalog.candidate_paths},
                  {"kept_paths", r.catalog.kept_paths},
                  {"candidate_loaded_variables", r.catalog.candidate_paths * T},
                  {"kept_loaded_variables", r.catalog.kept_paths * T}};
  j["model"] = {{"variables", r.variables}, {"constraints", r.constraints}, {"violations", r.violations}};
  if (r.solution) {
    const PlanSolution& s = *r.solution;
    nlohmann::ordered_json sol;
    sol["fleet"] = s.fleet;
    nlohmann::ordered_json chargers = nlohmann::ordered_json::object();
    nlohmann::ordered_json parking = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < s.chargers.size(); ++i) {
      const std::string& name = net.name(static_cast<NodeId>(i));
      chargers[name] = s.chargers[i];
      parking[name] = {{"initial", s.initial_parking[i]}, {"hourly", s.parking[i]}};
    }
    sol["chargers"] = chargers;
    sol["costs"] = costs_json(s.costs);
    sol["driving"] = s.driving;
    sol["parked"] = s.parked;
    sol["parking"] = parking;
    sol["loaded_flows"] = flows_json(r.loaded_paths, s.loaded_flows, net);
    sol["relocation_flows"] = flows_json(r.relocation_paths, s.relocation_flows, net);
    j["solution"] = sol;
  }
  out << j.dump(2) << '\n';
}

void write_run_summary(std::ostream& out, const RunRecord& r, const PreparedScenario& prepared) {
  const Network& net = prepared.network.base();
  out << "strategy " << to_string(r.strategy) << ", mode " << to_string(r.mode) << ": " << to_string(r.status);
  if (!r.message.empty()) out << " (" << r.message << ")";
  out << '\n';
  if (!r.solution) return;
  const PlanSolution& s = *r.solution;
  out << "  fleet size        " << format_number(s.fleet) << '\n';
  out << "  chargers          " << format_number(s.total_chargers());
  for (std::size_t i = 0; i < s.chargers.size(); ++i) {
    if (s.chargers[i] > 0.5) out << ' ' << net.name(static_cast<NodeId>(i)) << '=' << format_number(s.chargers[i]);
  }
  out << '\n';
  out << "  loaded paths      " << r.catalog.kept_paths << " of " << r.catalog.candidate_paths << " candidates\n";
  out << "  annual cost       investment " << format_number(s.costs.investment) << ", driving time "
      << format_number(s.costs.driving_time) << ", charging time " << format_number(s.costs.charging_time)
      << ", electricity " << format_number(s.costs.electricity) << ", maintenance "
      << format_number(s.costs.maintenance) << '\n';
  out << "  total             " << format_number(s.costs.total) << " (LP bound " << format_number(r.lp_bound)
      << ")\n";
}

}  // namespace aevplan
