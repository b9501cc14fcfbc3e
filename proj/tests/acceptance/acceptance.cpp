// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aevplan/cli.hpp"
#include "aevplan/harness.hpp"
#include "oracles/enumerate.hpp"
#include "support/fixtures.hpp"

using namespace aevplan;

namespace {

// Every bundled scenario that is meant to be solved to optimality.
const std::vector<std::string> kSolvable = {
    "toy2.yaml",  "toy2_bidir.yaml", "line3.yaml",    "tri3.yaml",  "tri3_short.yaml",
    "imbalance3.yaml", "sweep2.yaml", "diamond4.yaml", "ring5.yaml", "square4.yaml",
};

const std::vector<std::string> kCutFixtures = {"diamond4.yaml", "ring5.yaml", "square4.yaml", "line3.yaml",
                                               "tri3.yaml", "imbalance3.yaml"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool close(double a, double b, double rel) { return fixture::relative_close(a, b, rel); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

Outcome c1_expansion() {
  const Network net = load_network(fixture::data("fig1.net"));
  const ExpandedNetwork ex = expand_network(net, 100.0);
  std::map<std::pair<std::string, std::string>, double> got;
  for (const ExpandedArc& a : ex.arcs()) got[{net.name(a.tail), net.name(a.head)}] = a.length_km;
  const std::map<std::pair<std::string, std::string>, double> want = {
      {{"o", "1"}, 50}, {{"o", "2"}, 80}, {{"o", "5"}, 85}, {{"1", "2"}, 30}, {{"1", "3"}, 90},
      {{"1", "5"}, 35}, {{"2", "3"}, 60}, {{"2", "4"}, 90}, {{"3", "4"}, 30}, {{"3", "d"}, 80},
      {{"4", "d"}, 50}, {{"5", "3"}, 65}, {{"5", "4"}, 95},
  };
  return {got == want, std::to_string(got.size()) + " arcs, all lengths exact, (5,4)=95 included"};
}

Outcome c2_parameters() {
  const double zeta = capital_recovery(0.08, 15);
  // Annuity recomputed from the discounted payment stream.
  double pv = 0.0;
  for (int t = 1; t <= 15; ++t) pv += std::pow(1.08, -t);
  const DerivedParameters d = derive_unit_costs(75.0, ChargerSpec{}, 0.08, 15.0);
  const bool ok = std::abs(zeta - 0.11683) < 1e-5 && std::abs(zeta - 1.0 / pv) < 1e-12 &&
                  d.costs.aev_cost == 45000.0 && d.costs.charger_cost == 92500.0 &&
                  std::abs(d.efficiency_kwh_per_km - 0.18275) <= 1e-15;
  return {ok, "zeta=" + fmt(zeta) + " c_ev=" + fmt(d.costs.aev_cost) + " c_sp=" + fmt(d.costs.charger_cost) +
                  " xi=" + fmt(d.efficiency_kwh_per_km)};
}

Outcome c3_oracle() {
  int fixtures = 0;
  bool ok = true;
  std::string notes;
  for (const std::string& f : fixture::kSmallScenarios) {
    const PreparedScenario prep = fixture::prepared(f);
    const bool small = prep.network.node_count() <= 3 && prep.demands.entries().size() <= 2 &&
                       prep.demands.horizon() <= 24;
    if (!small) {
      ok = false;
      notes += " " + f + ":too-large";
      continue;
    }
    ++fixtures;
    for (Mode mode : {Mode::Passenger, Mode::Goods}) {
      const PlanProblem p = fixture::problem(prep, Strategy::Optimal, mode);
      const SolveResult mip = solve_mip(p.lp);
      const oracle::MipResult independent = oracle::enumerate_mip(p.lp);
      const SolveResult bf = brute_force_oracle(p.lp, independent.box);
      const bool match = mip.report.status == SolveStatus::Optimal && independent.feasible &&
                         close(mip.report.objective, bf.report.objective, 1e-6) &&
                         close(mip.report.objective, independent.objective, 1e-6);
      if (!match) {
        ok = false;
        notes += " " + f + "/" + std::string(to_string(mode)) + ":mismatch";
      }
      if (f == "toy2.yaml" && mode == Mode::Passenger) {
        const bool plan = mip.values[p.fleet_var] == 4.0 && mip.values[p.charger_vars[0]] == 1.0 &&
                          mip.values[p.charger_vars[1]] == 1.0;
        ok = ok && plan;
        notes += " toy2:x=" + fmt(mip.values[p.fleet_var]) + ",y=(" + fmt(mip.values[p.charger_vars[0]]) + "," +
                 fmt(mip.values[p.charger_vars[1]]) + ")";
      }
    }
  }
  ok = ok && fixtures >= 5;
  return {ok, std::to_string(fixtures) + " fixtures x 2 modes agree within 1e-6;" + notes};
}

Outcome c4_cuts() {
  bool ok = true;
  int fixtures = 0;
  std::size_t before = 0, after = 0;
  std::string notes;
  for (const std::string& f : kCutFixtures) {
    const PreparedScenario prep = fixture::prepared(f, {"paths.k=20", "paths.gap=0"});
    if (prep.network.node_count() > 5) {
      ok = false;
      continue;
    }
    ++fixtures;
    for (Mode mode : {Mode::Passenger, Mode::Goods}) {
      const PathCatalog full = fixture::unpruned_catalog(prep, mode);
      const PathCatalog pruned = fixture::catalog(prep, Strategy::Optimal, mode);
      PathCatalog all_relocation = pruned;
      all_relocation.relocation = enumerated_relocation_pathsets(prep.context(), 20);
      const double a = solve_mip(fixture::problem(prep, full, Strategy::Optimal, mode).lp).report.objective;
      const double b = solve_mip(fixture::problem(prep, pruned, Strategy::Optimal, mode).lp).report.objective;
      const double c = solve_mip(fixture::problem(prep, all_relocation, Strategy::Optimal, mode).lp).report.objective;
      before += full.loaded_path_count();
      after += pruned.loaded_path_count();
      if (!close(a, b, 1e-6)) {
        ok = false;
        notes += " " + f + "/" + std::string(to_string(mode)) + ":pruned " + fmt(b) + " vs " + fmt(a);
      }
      if (!close(b, c, 1e-6)) {
        ok = false;
        notes += " " + f + "/" + std::string(to_string(mode)) + ":relocation " + fmt(c) + " vs " + fmt(b);
      }
    }
  }
  ok = ok && fixtures >= 3;
  return {ok, std::to_string(fixtures) + " fixtures x 2 modes; paths " + std::to_string(before) + " -> " +
                  std::to_string(after) + " with equal optima; adjacent relocation equals k=20 relocation sets" +
                  notes};
}

struct Comparison {
  std::string fixture;
  std::vector<RunRecord> rows;
};

const RunRecord& row(const Comparison& c, Strategy s, Mode m) {
  for (const RunRecord& r : c.rows) {
    if (r.strategy == s && r.mode == m) return r;
  }
  throw std::runtime_error("missing row");
}

Outcome c5_dominance(const std::vector<Comparison>& all) {
  bool ok = true;
  double worst = kInfinity;
  std::string notes;
  for (const Comparison& c : all) {
    for (Mode m : {Mode::Passenger, Mode::Goods}) {
      const RunRecord& best = row(c, Strategy::Optimal, m);
      for (Strategy s : {Strategy::MinTime, Strategy::MinOperation, Strategy::NoRelocation}) {
        const RunRecord& other = row(c, s, m);
        if (!best.solved() || !other.solved()) {
          ok = false;
          notes += " " + c.fixture + ":unsolved";
          continue;
        }
        const double slack = other.objective - best.objective;
        worst = std::min(worst, slack);
        if (slack < -1e-9) {
          ok = false;
          notes += " " + c.fixture + "/" + std::string(to_string(s)) + ":" + fmt(slack);
        }
      }
    }
  }
  for (const Comparison& c : all) {
    if (c.fixture != "imbalance3.yaml") continue;
    const double opt = row(c, Strategy::Optimal, Mode::Passenger).fleet();
    const double norel = row(c, Strategy::NoRelocation, Mode::Passenger).fleet();
    ok = ok && norel > opt;
    notes += " imbalance3: NoRelocation fleet " + fmt(norel) + " > Optimal fleet " + fmt(opt);
  }
  return {ok, std::to_string(all.size()) + " fixtures, min slack " + fmt(worst) + ";" + notes};
}

Outcome c6_goods(const std::vector<Comparison>& all) {
  bool ok = true;
  double worst = 0.0;
  for (const Comparison& c : all) {
    const PreparedScenario pax0 = fixture::prepared(c.fixture, {"costs.time_cost=0"});
    const RunRecord pax = run_strategy(pax0, Strategy::Optimal, Mode::Passenger);
    const RunRecord& goods = row(c, Strategy::Optimal, Mode::Goods);
    const double rel = std::abs(pax.objective - goods.objective) / std::max(1.0, std::abs(goods.objective));
    worst = std::max(worst, rel);
    ok = ok && pax.solved() && goods.solved() && rel <= 1e-9;
  }
  return {ok, std::to_string(all.size()) + " fixtures, max relative difference " + fmt(worst)};
}

Outcome c7_sandwich(const std::vector<Comparison>& all) {
  bool ok = true;
  double max_gap = 0.0;
  std::size_t runs = 0;
  for (const Comparison& c : all) {
    for (const RunRecord& r : c.rows) {
      ++runs;
      const double tol = 1e-9 * std::max(1.0, std::abs(r.objective));
      ok = ok && r.solved() && r.lp_bound <= r.objective + tol && r.objective <= r.rounded_objective + tol;
      const double gap = (r.rounded_objective - r.lp_bound) / std::max(1.0, std::abs(r.lp_bound));
      max_gap = std::max(max_gap, gap);
    }
  }
  return {ok, std::to_string(runs) + " runs satisfy LP <= MIP <= rounded; max rounded gap " + fmt(max_gap)};
}

Outcome c8_reduction() {
  const PreparedScenario prep = fixture::prepared("synthetic25.yaml");
  const WarmupResult w = warmup_objective(prep, Mode::Passenger);
  const PathCatalog cat = build_catalog(prep, Strategy::Optimal, Mode::Passenger, w.objective);
  const PlanProblem p = fixture::problem(prep, cat, Strategy::Optimal, Mode::Passenger);
  const auto T = static_cast<std::size_t>(prep.demands.horizon());
  const std::size_t before = cat.stats.candidate_paths * T;
  const std::size_t after = p.loaded_flow_variable_count();
  const double ratio = static_cast<double>(after) / static_cast<double>(before);
  const bool ok = prep.demands.entries().size() == 600 && T == 24 && cat.stats.k == 150 && ratio <= 0.10 &&
                  after == cat.stats.kept_paths * T;
  return {ok, "600 OD pairs, k=150: loaded-path variables " + std::to_string(before) + " -> " +
                  std::to_string(after) + " (" + fmt(100.0 * (1.0 - ratio)) + "% reduction), model " +
                  std::to_string(p.lp.variables.size()) + " vars x " + std::to_string(p.lp.constraints.size()) +
                  " rows, warm-up objective " + fmt(w.objective)};
}

Outcome c9_sensitivity() {
  bool ok = true;
  std::string detail;
  auto check_point = [&](SweepParameter param, double value, const SweepRow& r) {
    const std::string key = param == SweepParameter::ChargerPower ? "charger.power_kw" : "vehicle.speed_kmh";
    const PreparedScenario prep = fixture::prepared("sweep2.yaml", {key + "=" + fmt(value)});
    const oracle::MipResult o = oracle::enumerate_mip(fixture::problem(prep, Strategy::Optimal, Mode::Passenger).lp);
    ok = ok && o.feasible && close(o.objective, r.costs.total, 1e-6);
  };

  SweepSpec spec;
  spec.base = fixture::config("sweep2.yaml");
  spec.parameter = SweepParameter::ChargerPower;
  spec.values = {50, 100, 150};
  const std::vector<SweepRow> power = sweep(spec);
  detail += "total cost by power:";
  for (std::size_t i = 0; i < power.size(); ++i) {
    ok = ok && power[i].status == "optimal";
    if (i > 0) ok = ok && power[i].costs.total <= power[i - 1].costs.total + 1e-9;
    check_point(spec.parameter, spec.values[i], power[i]);
    detail += " " + fmt(power[i].costs.total);
  }

  spec.parameter = SweepParameter::SpeedKmh;
  spec.values = {80, 100, 120};
  const std::vector<SweepRow> speed = sweep(spec);
  detail += "; fleet by speed:";
  for (std::size_t i = 0; i < speed.size(); ++i) {
    ok = ok && speed[i].status == "optimal";
    if (i > 0) ok = ok && speed[i].fleet <= speed[i - 1].fleet;
    check_point(spec.parameter, spec.values[i], speed[i]);
    detail += " " + fmt(speed[i].fleet);
  }
  return {ok, detail + "; every point matches the enumeration oracle"};
}

Outcome c10_determinism() {
  auto run = [](const std::filesystem::path& dir) {
    std::ostringstream out, err;
    const int code = dispatch({"compare", "--scenario", fixture::data("diamond4.yaml").string(), "--out", dir.string()},
                              out, err);
    std::ifstream in(dir / "compare.csv", std::ios::binary);
    std::stringstream file;
    file << in.rdbuf();
    return std::tuple(code, out.str(), file.str());
  };
  const auto base = std::filesystem::temp_directory_path() / "aevplan_acceptance";
  std::filesystem::remove_all(base);
  const auto [c1, out1, file1] = run(base / "a");
  const auto [c2, out2, file2] = run(base / "b");
  std::filesystem::remove_all(base);
  const bool ok = c1 == 0 && c2 == 0 && !file1.empty() && file1 == file2 && out1 == out2;
  return {ok, "two compare runs on diamond4: " + std::to_string(file1.size()) + " bytes, identical"};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int id, const char* title, double limit_s, const std::function<Outcome()>& fn,
                    double shared_s = 0.0) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count() + shared_s;
    const bool within = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && within;
    failures += pass ? 0 : 1;
    std::printf("criterion %2d: %s  %s [%.2fs%s] %s\n", id, pass ? "PASS" : "FAIL", title, secs,
                within ? "" : " over time limit", o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "expansion of the 7-node example", 1.0, c1_expansion);
  report(2, "parameter formulas", 1.0, c2_parameters);
  report(3, "MIP vs brute-force oracle", 60.0, c3_oracle);
  report(4, "cut soundness", 300.0, c4_cuts);

  std::vector<Comparison> comparisons;
  const auto t0 = clock::now();
  for (const std::string& f : kSolvable) comparisons.push_back({f, compare_strategies(fixture::prepared(f))});
  const double compare_s = std::chrono::duration<double>(clock::now() - t0).count();
  report(5, "strategy dominance", 300.0, [&] { return c5_dominance(comparisons); }, compare_s);
  report(6, "goods equals passenger without time cost", 0.0, [&] { return c6_goods(comparisons); });
  report(7, "LP <= MIP <= rounded sandwich", 0.0, [&] { return c7_sandwich(comparisons); });
  report(8, "variable reduction on the 25-node synthetic network", 600.0, c8_reduction);
  report(9, "sensitivity monotonicity", 0.0, c9_sensitivity);
  report(10, "compare determinism", 0.0, c10_determinism);
  std::printf("%d of 10 criteria failed (shared compare runs took %.2fs)\n", failures, compare_s);
  return failures == 0 ? 0 : 1;
}
