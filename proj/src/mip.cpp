#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "aevplan/error.hpp"
#include "aevplan/solver.hpp"
#include "simplex.hpp"

namespace aevplan {
namespace {

constexpr double kRowTol = 1e-6;

bool point_feasible(const LinearProblem& p, std::span<const double> x, std::span<const double> lower,
                    std::span<const double> upper, double tol) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] - tol * std::max(1.0, std::abs(lower[j]))) return false;
    if (x[j] > upper[j] + tol * std::max(1.0, std::abs(upper[j]))) return false;
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (p.row_violation(i, x) > tol * std::max(1.0, std::abs(p.constraints[i].rhs))) return false;
  }
  return true;
}

double max_violation(const LinearProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    worst = std::max(worst, p.row_violation(i, x) / std::max(1.0, std::abs(p.constraints[i].rhs)));
  }
  return worst;
}

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

struct BoundChange {
  std::size_t var;
  double lower;
  double upper;
};

struct Node {
  double bound;
  std::int64_t id;
  std::vector<BoundChange> changes;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

RoundingResult round_up_heuristic(const LinearProblem& problem, std::span<const double> lp_values, double lp_bound,
                                  double tolerance) {
  if (lp_values.size() != problem.variables.size()) throw InputError("round_up_heuristic: size mismatch");
  RoundingResult r;
  r.values.assign(lp_values.begin(), lp_values.end());
  for (std::size_t j = 0; j < r.values.size(); ++j) {
    if (!problem.variables[j].integer) continue;
    // Values within tolerance of an integer are snapped rather than bumped.
    const double nearest = std::round(r.values[j]);
    r.values[j] = std::abs(r.values[j] - nearest) <= tolerance ? nearest : std::ceil(r.values[j]);
  }
  std::vector<double> lower, upper;
  for (const Variable& v : problem.variables) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  r.feasible = point_feasible(problem, r.values, lower, upper, tolerance);
  r.objective = problem.objective_value(r.values);
  if (r.objective == lp_bound) {
    r.gap = 0.0;
  } else {
    r.gap = (r.objective - lp_bound) / std::abs(lp_bound);
  }
  return r;
}

SolveResult solve_mip(const LinearProblem& problem, const SolveOptions& options) {
  options.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const std::size_t n = problem.variables.size();
  std::vector<double> root_lower(n), root_upper(n);
  for (std::size_t j = 0; j < n; ++j) {
    root_lower[j] = problem.variables[j].lower;
    root_upper[j] = problem.variables[j].upper;
    if (problem.variables[j].integer) {
      root_lower[j] = std::ceil(root_lower[j] - options.integrality_tolerance);
      root_upper[j] = std::floor(root_upper[j] + options.integrality_tolerance);
    }
  }
  const std::vector<std::size_t> ints = problem.integer_variables();

  SolveResult best;
  best.report.status = SolveStatus::Infeasible;
  double incumbent = kInfinity;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
  double dual_residual = 0.0;

  auto offer = [&](std::vector<double> values) {
    const double obj = problem.objective_value(values);
    if (obj < incumbent) {
      incumbent = obj;
      best.values = std::move(values);
    }
  };

  // Ceil the integers, then re-optimize the continuous part with them fixed.
  auto try_rounding = [&](const std::vector<double>& lp, std::span<const double> lower,
                          std::span<const double> upper) {
    std::vector<double> fl(lower.begin(), lower.end()), fu(upper.begin(), upper.end());
    for (std::size_t j : ints) {
      const double nearest = std::round(lp[j]);
      const double v = std::abs(lp[j] - nearest) <= options.integrality_tolerance ? nearest : std::ceil(lp[j]);
      if (v > root_upper[j]) return;
      fl[j] = fu[j] = v;
    }
    SolveResult fixed = detail::solve_relaxation(problem, fl, fu);
    iterations += fixed.report.iterations;
    if (fixed.report.status == SolveStatus::Optimal) offer(std::move(fixed.values));
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{-kInfinity, 0, {}});
  std::int64_t next_id = 1;
  bool hit_limit = false;
  bool root = true;
  double limit_bound = kInfinity;

  std::vector<double> lower(n), upper(n);
  while (!open.empty()) {
    const double tol = options.mip_relative_gap * std::max(1.0, std::abs(incumbent));
    if (open.top().bound >= incumbent - tol) {
      // Best-bound order: every remaining node is dominated.
      open = {};
      break;
    }
    if (nodes >= options.node_limit || elapsed() > options.time_limit_seconds) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    ++nodes;

    lower = root_lower;
    upper = root_upper;
    for (const BoundChange& c : node.changes) {
      lower[c.var] = c.lower;
      upper[c.var] = c.upper;
    }
    SolveResult lp = detail::solve_relaxation(problem, lower, upper);
    iterations += lp.report.iterations;
    if (root) {
      root = false;
      dual_residual = lp.report.dual_residual;
      if (lp.report.status == SolveStatus::Unbounded) {
        best.report.status = SolveStatus::Unbounded;
        best.report.iterations = iterations;
        best.report.nodes = nodes;
        best.report.wall_seconds = elapsed();
        return best;
      }
    }
    if (lp.report.status == SolveStatus::Infeasible) continue;
    if (lp.report.status != SolveStatus::Optimal) {
      // Could not settle this node; its parent bound stays a valid lower bound.
      hit_limit = true;
      limit_bound = std::min(limit_bound, node.bound);
      continue;
    }
    const double bound = lp.report.objective;
    if (bound >= incumbent - options.mip_relative_gap * std::max(1.0, std::abs(incumbent))) continue;

    std::optional<std::size_t> branch;
    double best_frac = -1.0;
    for (std::size_t j : ints) {
      const double v = lp.values[j];
      const double frac = v - std::floor(v);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist <= options.integrality_tolerance) continue;
      if (dist > best_frac + 1e-12) {
        best_frac = dist;
        branch = j;
      }
    }
    if (!branch) {
      std::vector<double> values = lp.values;
      for (std::size_t j : ints) values[j] = std::round(values[j]);
      if (point_feasible(problem, values, lower, upper, kRowTol)) {
        offer(std::move(values));
      } else {
        try_rounding(lp.values, lower, upper);
      }
      continue;
    }
    try_rounding(lp.values, lower, upper);

    const std::size_t j = *branch;
    const double v = lp.values[j];
    Node down{bound, next_id++, node.changes};
    down.changes.push_back({j, lower[j], std::floor(v)});
    Node up{bound, next_id++, std::move(node.changes)};
    up.changes.push_back({j, std::ceil(v), upper[j]});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double global_bound = incumbent;
  if (!open.empty()) global_bound = std::min(global_bound, open.top().bound);
  global_bound = std::min(global_bound, limit_bound);

  best.report.iterations = iterations;
  best.report.nodes = nodes;
  best.report.dual_residual = dual_residual;
  best.report.wall_seconds = elapsed();
  if (std::isfinite(incumbent)) {
    best.report.objective = incumbent;
    best.report.best_bound = std::min(global_bound, incumbent);
    best.report.relative_gap = relative_gap(incumbent, best.report.best_bound);
    best.report.primal_residual = max_violation(problem, best.values);
    if (!hit_limit) {
      best.report.status = SolveStatus::Optimal;
    } else {
      best.report.status =
          best.report.relative_gap <= options.mip_relative_gap ? SolveStatus::Optimal : SolveStatus::Limit;
    }
  } else {
    best.report.status = hit_limit ? SolveStatus::Limit : SolveStatus::Infeasible;
    best.report.best_bound = global_bound;
  }
  return best;
}

SolveResult brute_force_oracle(const LinearProblem& problem, std::span<const IntegerRange> ranges) {
  const std::size_t n = problem.variables.size();
  std::vector<char> appears(n, 0);
  for (const Constraint& c : problem.constraints) {
    for (const Term& t : c.terms) {
      if (t.coef != 0.0) appears[t.var] = 1;
    }
  }
  std::vector<double> lower(n), upper(n);
  for (std::size_t j = 0; j < n; ++j) {
    lower[j] = problem.variables[j].lower;
    upper[j] = problem.variables[j].upper;
  }

  std::vector<IntegerRange> dims;
  for (std::size_t j : problem.integer_variables()) {
    const auto it = std::find_if(ranges.begin(), ranges.end(), [&](const IntegerRange& r) { return r.var == j; });
    if (!appears[j]) {
      const Variable& v = problem.variables[j];
      const double pin = v.objective >= 0.0 ? v.lower : v.upper;
      if (!std::isfinite(pin)) throw InputError("oracle: unconstrained integer variable " + v.name + " is unbounded");
      lower[j] = upper[j] = std::ceil(pin - 1e-9);
      continue;
    }
    if (it == ranges.end()) throw InputError("oracle: no range for integer variable " + problem.variables[j].name);
    if (it->upper < it->lower) throw InputError("oracle: empty range for " + problem.variables[j].name);
    dims.push_back(*it);
  }
  if (dims.size() > kOracleMaxDimensions) {
    throw InputError("oracle: " + std::to_string(dims.size()) + " integer dimensions exceed the limit of " +
                     std::to_string(kOracleMaxDimensions));
  }
  std::size_t combos = 1;
  for (const IntegerRange& d : dims) {
    const auto width = static_cast<std::size_t>(d.upper - d.lower + 1);
    if (combos > kOracleMaxCombinations / width) throw InputError("oracle: integer box too large");
    combos *= width;
  }

  SolveResult best;
  best.report.status = SolveStatus::Infeasible;
  double best_obj = kInfinity;
  std::vector<std::int64_t> point;
  for (const IntegerRange& d : dims) point.push_back(d.lower);
  for (std::size_t count = 0; count < combos; ++count) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      lower[dims[k].var] = upper[dims[k].var] = static_cast<double>(point[k]);
    }
    SolveResult sub = detail::solve_relaxation(problem, lower, upper);
    best.report.iterations += sub.report.iterations;
    if (sub.report.status == SolveStatus::Optimal && sub.report.objective < best_obj) {
      best_obj = sub.report.objective;
      best.values = std::move(sub.values);
      best.report.primal_residual = sub.report.primal_residual;
      best.report.dual_residual = sub.report.dual_residual;
    }
    // Odometer increment, last dimension fastest.
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++point[k] <= dims[k].upper) break;
      point[k] = dims[k].lower;
    }
  }
  best.report.nodes = static_cast<std::int64_t>(combos);
  if (std::isfinite(best_obj)) {
    best.report.status = SolveStatus::Optimal;
    best.report.objective = best_obj;
    best.report.best_bound = best_obj;
    best.report.relative_gap = 0.0;
  }
  return best;
}

}  // namespace aevplan
