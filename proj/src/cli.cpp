#include "aevplan/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "aevplan/error.hpp"
#include "aevplan/harness.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string scenario;
  std::string network;
  std::string demands;
  std::optional<double> range;
  std::string mode;
  std::string strategy;
  std::optional<int> k;
  std::optional<double> gap;
  std::optional<double> alpha;
  std::string out;
  std::vector<std::string> sets;
  int verbose = 0;
  std::string parameter;
  std::vector<double> values;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario file (YAML)");
  cmd->add_option("--network", o.network, "Network file");
  cmd->add_option("--demands", o.demands, "Demand file (CSV)");
  cmd->add_option("--range", o.range, "Driving range in km used for expansion");
  cmd->add_option("--mode", o.mode, "passenger|goods");
  cmd->add_option("--strategy", o.strategy, "mintime|minoperation|norelocation|optimal");
  cmd->add_option("--k", o.k, "Candidate paths per OD pair");
  cmd->add_option("--gap", o.gap, "Pruning gap");
  cmd->add_option("--alpha", o.alpha, "Charger margin");
  cmd->add_option("--out", o.out, "Output directory (default: $AEVPLAN_OUT, then the scenario's output_dir)");
  cmd->add_option("--set", o.sets, "Scenario override key=value (repeatable)");
  cmd->add_flag_function("-v,--verbose", [&o](std::int64_t n) { o.verbose += static_cast<int>(n); },
                         "Progress messages on stderr");
}

std::string absolute(const std::string& path) { return fs::absolute(path).lexically_normal().string(); }

ScenarioConfig build_config(const Options& o) {
  ScenarioConfig c = o.scenario.empty() ? ScenarioConfig{} : ScenarioConfig::load(o.scenario);
  if (!o.network.empty()) c.set("network", absolute(o.network));
  if (!o.demands.empty()) c.set("demands", absolute(o.demands));
  if (o.range) c.set("vehicle.range_km", format_number(*o.range));
  if (!o.mode.empty()) c.set("mode", o.mode);
  if (!o.strategy.empty()) c.set("strategy", o.strategy);
  if (o.k) c.set("paths.k", std::to_string(*o.k));
  if (o.gap) c.set("paths.gap", format_number(*o.gap));
  if (o.alpha) c.set("costs.charger_margin", format_number(*o.alpha));
  for (const std::string& s : o.sets) c.set_assignment(s);
  return c;
}

std::optional<fs::path> output_dir(const Options& o, const Scenario* s) {
  if (!o.out.empty()) return fs::path(o.out);
  if (const char* env = std::getenv("AEVPLAN_OUT"); env != nullptr && *env != '\0') return fs::path(env);
  if (s != nullptr && s->output_dir) return *s->output_dir;
  return std::nullopt;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw InputError("cannot write " + (dir / name).string());
  f << content;
}

int run_expand(const Options& o, std::ostream& out) {
  const ScenarioConfig config = build_config(o);
  const Scenario s = resolve(config);
  const Network net = load_network(s.network_file);
  const ExpandedNetwork ex = expand_network(net, s.expansion_range_km());
  std::ostringstream csv;
  csv << "tail,head,length_km,original,witness\n";
  for (const ExpandedArc& a : ex.arcs()) {
    csv << net.name(a.tail) << ',' << net.name(a.head) << ',' << format_number(a.length_km) << ','
        << (a.is_original ? 1 : 0) << ',';
    for (std::size_t i = 0; i < a.witness_path.size(); ++i) csv << (i ? " " : "") << net.name(a.witness_path[i]);
    csv << '\n';
  }
  out << csv.str();
  if (const auto dir = output_dir(o, &s)) write_file(*dir, "expanded.csv", csv.str());
  return 0;
}

int run_demand(const Options& o, std::ostream& out) {
  const Scenario s = resolve(build_config(o));
  const Network net = load_network(s.network_file);
  const DemandSet d = materialize_demands(s, net);
  std::ostringstream csv;
  write_demands(csv, d, net);
  out << csv.str();
  if (const auto dir = output_dir(o, &s)) write_file(*dir, "demands.csv", csv.str());
  return 0;
}

int run_plan(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = resolve(build_config(o));
  const PreparedScenario prepared = prepare(s);
  const RunRecord rec = run_strategy(prepared, s.strategy, s.mode);
  if (o.verbose) {
    err << "model: " << rec.variables << " variables, " << rec.constraints << " constraints, " << rec.nodes
        << " branch-and-bound nodes\n";
  }
  std::ostringstream summary, json;
  write_run_summary(summary, rec, prepared);
  write_run_json(json, rec, prepared);
  out << summary.str();
  if (const auto dir = output_dir(o, &s)) {
    const std::string stem = "plan_" + std::string(to_string(s.strategy)) + "_" + std::string(to_string(s.mode));
    write_file(*dir, stem + ".json", json.str());
    write_file(*dir, stem + ".txt", summary.str());
  }
  return rec.solved() ? 0 : 1;
}

int run_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = resolve(build_config(o));
  const PreparedScenario prepared = prepare(s);
  const std::vector<RunRecord> records = compare_strategies(prepared);
  std::vector<ComparisonRow> rows;
  bool all_solved = true;
  for (const RunRecord& r : records) {
    rows.push_back(comparison_row(r));
    all_solved = all_solved && r.solved();
    if (o.verbose || !r.message.empty()) {
      err << to_string(r.strategy) << '/' << to_string(r.mode) << ": " << to_string(r.status);
      if (!r.message.empty()) err << " (" << r.message << ')';
      err << '\n';
    }
  }
  std::ostringstream csv;
  write_comparison_csv(csv, rows);
  out << csv.str();
  if (const auto dir = output_dir(o, &s)) write_file(*dir, "compare.csv", csv.str());
  return all_solved ? 0 : 1;
}

int run_sweep(const Options& o, std::ostream& out) {
  SweepSpec spec;
  spec.parameter = parse_sweep_parameter(o.parameter);
  spec.values = o.values;
  spec.base = build_config(o);
  const Scenario s = resolve(spec.base);
  const std::vector<SweepRow> rows = sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(csv, spec.parameter, rows);
  out << csv.str();
  if (const auto dir = output_dir(o, &s)) {
    write_file(*dir, "sweep_" + std::string(to_string(spec.parameter)) + ".csv", csv.str());
  }
  bool all_solved = true;
  for (const SweepRow& r : rows) all_solved = all_solved && r.status == to_string(SolveStatus::Optimal);
  return all_solved ? 0 : 1;
}

int run_export(const Options& o, std::ostream& out) {
  const Scenario s = resolve(build_config(o));
  const PreparedScenario prepared = prepare(s);
  double obj0 = 0.0;
  if (s.strategy == Strategy::Optimal || s.strategy == Strategy::NoRelocation) {
    obj0 = warmup_objective(prepared, s.mode).objective;
  }
  const PathCatalog catalog = build_catalog(prepared, s.strategy, s.mode, obj0);
  const PlanProblem problem = build_problem(
      PlanInputs{prepared.context(), &prepared.demands, &catalog, s.mode, s.strategy, s.relocation_window_hours});
  std::ostringstream lp;
  write_lp_format(lp, problem.lp);
  if (const auto dir = output_dir(o, &s)) {
    write_file(*dir, "model.lp", lp.str());
  } else {
    out << lp.str();
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fleet sizing and charging-station planning for autonomous electric vehicles", "aevplan"};
  app.require_subcommand(1);
  Options o;
  CLI::App* expand = app.add_subcommand("expand", "Print the range-expanded network");
  CLI::App* demand = app.add_subcommand("demand", "Print the scenario demand table");
  CLI::App* plan = app.add_subcommand("plan", "Solve one strategy and report the plan");
  CLI::App* compare = app.add_subcommand("compare", "Run every strategy in both modes");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Rerun the scenario over a parameter grid");
  CLI::App* export_lp = app.add_subcommand("export-lp", "Write the planning model in LP format");
  for (CLI::App* cmd : {expand, demand, plan, compare, sweep_cmd, export_lp}) add_common(cmd, o);
  sweep_cmd->add_option("--parameter", o.parameter, "charger_power|battery_kwh|speed_kmh")->required();
  sweep_cmd->add_option("--values", o.values, "Comma-separated ascending values")->required()->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failed->help();
    return 2;
  }

  try {
    if (expand->parsed()) return run_expand(o, out);
    if (demand->parsed()) return run_demand(o, out);
    if (plan->parsed()) return run_plan(o, out, err);
    if (compare->parsed()) return run_compare(o, out, err);
    if (sweep_cmd->parsed()) return run_sweep(o, out);
    if (export_lp->parsed()) return run_export(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace aevplan
