#include <doctest.h>

#include <random>

#include "aevplan/error.hpp"
#include "aevplan/solver.hpp"
#include "oracles/enumerate.hpp"
#include "support/fixtures.hpp"

using namespace aevplan;

namespace {

// Random LP that is feasible at a random interior point and bounded by finite
// variable bounds.
LinearProblem random_lp(std::mt19937& rng, int n, int m, int n_int) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LinearProblem p;
  std::vector<double> x0;
  for (int j = 0; j < n; ++j) {
    const double ub = 2.0 + std::floor(8.0 * u(rng));
    const bool integer = j < n_int;
    p.add_variable({"v" + std::to_string(j), 0.0, ub, 10.0 * u(rng) - 3.0, integer});
    x0.push_back(integer ? std::floor(ub * u(rng)) : ub * u(rng));
  }
  for (int i = 0; i < m; ++i) {
    Constraint c;
    c.name = "c" + std::to_string(i);
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (u(rng) < 0.5) continue;
      const double a = std::round(20.0 * u(rng) - 10.0) / 2.0;
      if (a == 0.0) continue;
      c.terms.push_back({static_cast<std::size_t>(j), a});
      act += a * x0[static_cast<std::size_t>(j)];
    }
    const int kind = i % 3;
    c.sense = kind == 0 ? Sense::LessEqual : kind == 1 ? Sense::GreaterEqual : Sense::Equal;
    c.rhs = kind == 0 ? act + 3.0 * u(rng) : kind == 1 ? act - 3.0 * u(rng) : act;
    p.add_constraint(std::move(c));
  }
  return p;
}

LinearProblem tiny(double lower, double upper, double cost) {
  LinearProblem p;
  p.add_variable({"x", lower, upper, cost, false});
  return p;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("LP optimum matches the dense tableau oracle on random problems") {
  std::mt19937 rng(3);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const LinearProblem p = random_lp(rng, 3 + trial % 8, 2 + trial % 6, 0);
    const SolveResult r = solve_lp(p);
    const oracle::DenseLpResult o = oracle::dense_lp(p);
    REQUIRE(o.status == oracle::DenseLpResult::Status::Optimal);
    REQUIRE(r.report.status == SolveStatus::Optimal);
    CHECK(fixture::relative_close(r.report.objective, o.objective, 1e-8));
    CHECK(r.report.primal_residual <= 1e-6);
    for (std::size_t i = 0; i < p.constraints.size(); ++i) CHECK(p.row_violation(i, r.values) <= 1e-6);
    ++compared;
  }
  CHECK(compared == 150);
}

TEST_CASE("infeasible and unbounded problems are classified") {
  LinearProblem inf = tiny(0.0, kInfinity, 1.0);
  inf.add_constraint({"lo", Sense::GreaterEqual, 5.0, {{0, 1.0}}});
  inf.add_constraint({"hi", Sense::LessEqual, 3.0, {{0, 1.0}}});
  CHECK(solve_lp(inf).report.status == SolveStatus::Infeasible);
  CHECK(solve_mip(inf).report.status == SolveStatus::Infeasible);

  LinearProblem unb = tiny(0.0, kInfinity, -1.0);
  unb.add_variable({"y", 0.0, kInfinity, 0.0, false});
  unb.add_constraint({"r", Sense::GreaterEqual, 1.0, {{0, 1.0}, {1, 1.0}}});
  CHECK(solve_lp(unb).report.status == SolveStatus::Unbounded);

  LinearProblem free_var = tiny(-kInfinity, kInfinity, 1.0);
  free_var.add_constraint({"r", Sense::GreaterEqual, -4.5, {{0, 1.0}}});
  const SolveResult fr = solve_lp(free_var);
  CHECK(fr.report.status == SolveStatus::Optimal);
  CHECK(fr.report.objective == doctest::Approx(-4.5));
}

TEST_CASE("forcing rows and degenerate infeasible nodes") {
  // x + y <= 0 with x, y >= 0 pins both; the equality then cannot hold.
  LinearProblem p = tiny(0.0, 5.0, 1.0);
  p.add_variable({"y", 0.0, 5.0, 2.0, false});
  p.add_variable({"z", 0.0, 5.0, 1.0, false});
  p.add_constraint({"force", Sense::LessEqual, 0.0, {{0, 1.0}, {1, 1.0}}});
  p.add_constraint({"need", Sense::Equal, 2.0, {{0, 1.0}, {2, 1.0}}});
  const SolveResult r = solve_lp(p);
  const oracle::DenseLpResult o = oracle::dense_lp(p);
  REQUIRE(r.report.status == SolveStatus::Optimal);
  CHECK(r.report.objective == doctest::Approx(o.objective));
  CHECK(r.values[2] == doctest::Approx(2.0));
  p.variables[2].upper = 1.0;
  CHECK(solve_lp(p).report.status == SolveStatus::Infeasible);

  // Chargers switched off at B and C leave the D->A trips uncoverable.
  const PreparedScenario prep = fixture::prepared("diamond4.yaml");
  PlanProblem pp = fixture::problem(prep, Strategy::Optimal, Mode::Passenger);
  for (Variable& v : pp.lp.variables) {
    if (v.name == "y_B" || v.name == "y_C") v.lower = v.upper = 0.0;
  }
  CHECK(solve_lp(pp.lp).report.status == SolveStatus::Infeasible);
}

TEST_CASE("zero objective and empty problems") {
  LinearProblem p = tiny(0.0, 10.0, 0.0);
  p.add_constraint({"r", Sense::LessEqual, 4.0, {{0, 1.0}}});
  CHECK(solve_lp(p).report.objective == 0.0);
  const LinearProblem empty;
  const SolveResult r = solve_mip(empty);
  CHECK(r.report.status == SolveStatus::Optimal);
  CHECK(r.report.objective == 0.0);
}

TEST_CASE("MIP optimum matches exhaustive enumeration on random problems") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const LinearProblem p = random_lp(rng, 4 + trial % 4, 2 + trial % 4, 2 + trial % 2);
    const SolveResult mip = solve_mip(p);
    const oracle::MipResult o = oracle::enumerate_mip(p);
    REQUIRE(o.feasible);
    REQUIRE(mip.report.status == SolveStatus::Optimal);
    CHECK(fixture::relative_close(mip.report.objective, o.objective, 1e-6));
    const SolveResult lp = solve_lp(p);
    CHECK(lp.report.objective <= mip.report.objective + 1e-6 * std::max(1.0, std::abs(mip.report.objective)));

    const SolveResult bf = brute_force_oracle(p, o.box);
    CHECK(fixture::relative_close(bf.report.objective, mip.report.objective, 1e-6));
    for (std::size_t j : p.integer_variables()) CHECK(mip.values[j] == std::round(mip.values[j]));
  }
}

TEST_CASE("two-node toy: LP and MIP against the oracle") {
  const PreparedScenario prep = fixture::prepared("toy2.yaml");
  const PlanProblem pp = fixture::problem(prep, Strategy::Optimal, Mode::Passenger);
  const SolveResult lp = solve_lp(pp.lp);
  const oracle::DenseLpResult dense = oracle::dense_lp(pp.lp);
  REQUIRE(dense.status == oracle::DenseLpResult::Status::Optimal);
  CHECK(fixture::relative_close(lp.report.objective, dense.objective, 1e-8));

  const SolveResult mip = solve_mip(pp.lp);
  const oracle::MipResult o = oracle::enumerate_mip(pp.lp);
  REQUIRE(o.feasible);
  CHECK(fixture::relative_close(mip.report.objective, o.objective, 1e-6));
  CHECK(mip.values[pp.fleet_var] == 4.0);
  CHECK(mip.values[pp.charger_vars[0]] == 1.0);
  CHECK(mip.values[pp.charger_vars[1]] == 1.0);
  CHECK(o.values[pp.fleet_var] == doctest::Approx(4.0));
  CHECK(mip.report.best_bound <= mip.report.objective + 1e-9);
  CHECK(lp.report.objective <= mip.report.objective);

  const SolveResult bf = brute_force_oracle(pp.lp, o.box);
  CHECK(fixture::relative_close(bf.report.objective, mip.report.objective, 1e-6));

  // A box that includes infeasible points (no chargers) still finds the optimum.
  std::vector<IntegerRange> wide = o.box;
  for (IntegerRange& r : wide) {
    r.lower = 0;
    r.upper = std::max<std::int64_t>(r.upper, 1);
  }
  const SolveResult bf_wide = brute_force_oracle(pp.lp, wide);
  CHECK(fixture::relative_close(bf_wide.report.objective, mip.report.objective, 1e-6));
}

TEST_CASE("brute-force oracle limits and zero demand") {
  LinearProblem p;
  p.add_variable({"x", 0.0, kInfinity, 1.0, true});
  p.add_variable({"f", 0.0, kInfinity, 1.0, false});
  p.add_constraint({"cover", Sense::GreaterEqual, 0.0, {{0, 1.0}, {1, -1.0}}});
  const IntegerRange box[] = {{0, 0, 3}};
  const SolveResult r = brute_force_oracle(p, box);
  CHECK(r.report.objective == 0.0);
  CHECK(r.values[0] == 0.0);
  CHECK_THROWS_AS(brute_force_oracle(p, {}), InputError);
  const IntegerRange huge[] = {{0, 0, 1'000'000}};
  CHECK_THROWS_AS(brute_force_oracle(p, huge), InputError);
}

TEST_CASE("ceiling heuristic") {
  LinearProblem p;
  p.add_variable({"x", 0.0, kInfinity, 1.0, true});
  p.add_constraint({"need", Sense::GreaterEqual, 3.2, {{0, 1.0}}});
  const SolveResult lp = solve_lp(p);
  CHECK(lp.values[0] == doctest::Approx(3.2));
  const RoundingResult r = round_up_heuristic(p, lp.values, lp.report.objective);
  CHECK(r.feasible);
  CHECK(r.values[0] == 4.0);
  CHECK(r.gap == doctest::Approx((4.0 - 3.2) / 3.2));

  const double integral[] = {5.0};
  const RoundingResult same = round_up_heuristic(p, integral, 5.0);
  CHECK(same.values[0] == 5.0);
  CHECK(same.gap == 0.0);

  const PreparedScenario prep = fixture::prepared("toy2.yaml");
  const PlanProblem pp = fixture::problem(prep, Strategy::Optimal, Mode::Passenger);
  const SolveResult toy = solve_lp(pp.lp);
  const RoundingResult tr = round_up_heuristic(pp.lp, toy.values, toy.report.objective);
  CHECK(tr.feasible);
  // Ceiling lands on the enumerated optimum; the gap is the integrality gap.
  const oracle::MipResult o = oracle::enumerate_mip(pp.lp);
  CHECK(fixture::relative_close(tr.objective, o.objective, 1e-6));
  CHECK(tr.gap == doctest::Approx((o.objective - toy.report.objective) / toy.report.objective).epsilon(1e-6));
}

TEST_CASE("solver runs are deterministic") {
  std::mt19937 rng(99);
  const LinearProblem p = random_lp(rng, 8, 6, 3);
  const SolveResult a = solve_mip(p), b = solve_mip(p);
  CHECK(a.values == b.values);
  CHECK(a.report.objective == b.report.objective);
  CHECK(a.report.nodes == b.report.nodes);
  CHECK(a.report.iterations == b.report.iterations);
}

TEST_CASE("solve options are validated") {
  SolveOptions o;
  o.mip_relative_gap = -1.0;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = SolveOptions{};
  o.node_limit = 0;
  CHECK_THROWS_AS(o.validate(), InputError);
  CHECK(to_string(SolveStatus::Optimal) == "optimal");
}

TEST_CASE("node limit reports the incumbent with status limit") {
  const PreparedScenario prep = fixture::prepared("line3.yaml");
  const PlanProblem pp = fixture::problem(prep, Strategy::Optimal, Mode::Passenger);
  SolveOptions o;
  o.node_limit = 1;
  const SolveResult r = solve_mip(pp.lp, o);
  const SolveResult full = solve_mip(pp.lp);
  if (r.report.status == SolveStatus::Limit) {
    CHECK(r.report.has_solution());
    CHECK(r.report.objective >= full.report.objective - 1e-6);
  } else {
    CHECK(r.report.status == SolveStatus::Optimal);
  }
}

}
