#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aevplan/linear_problem.hpp"

namespace aevplan {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Limit, NumericalFailure };

std::string_view to_string(SolveStatus status);

enum class Backend { BuiltinSimplex };

struct SolveOptions {
  double mip_relative_gap = 1e-6;
  double integrality_tolerance = 1e-6;
  double time_limit_seconds = kInfinity;
  std::int64_t node_limit = 1'000'000;
  Backend backend = Backend::BuiltinSimplex;

  void validate() const;
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = kInfinity;
  double best_bound = -kInfinity;
  double relative_gap = kInfinity;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;
  double wall_seconds = 0.0;
  double primal_residual = 0.0;  // max row/bound violation of the returned point
  double dual_residual = 0.0;    // max reduced-cost sign violation, relative to max |c|

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
                                     (status == SolveStatus::Limit && objective < kInfinity); }
};

struct SolveResult {
  std::vector<double> values;  // one per variable; empty when no solution
  SolveReport report;
};

// Continuous relaxation (integrality flags ignored). Bounded-variable primal
// simplex, two phases, Dantzig pricing with a Bland fallback on stalling.
SolveResult solve_lp(const LinearProblem& problem);

// Branch and bound over the flagged integer variables: most-fractional
// branching (lowest index on ties), best-bound node selection, ceiling
// heuristic for incumbents.
SolveResult solve_mip(const LinearProblem& problem, const SolveOptions& options = {});

struct RoundingResult {
  std::vector<double> values;
  double objective = 0.0;
  double gap = 0.0;  // (objective - lp_bound) / |lp_bound|, 0 when both are 0
  bool feasible = false;
};

// Ceils every integer variable of an LP point and re-verifies feasibility.
RoundingResult round_up_heuristic(const LinearProblem& problem, std::span<const double> lp_values, double lp_bound,
                                  double tolerance = 1e-6);

struct IntegerRange {
  std::size_t var = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

inline constexpr std::size_t kOracleMaxCombinations = 250'000;
inline constexpr std::size_t kOracleMaxDimensions = 4;

// Exhaustive enumeration of integer assignments inside `ranges`, solving the
// continuous sub-problem for each. Integer variables that appear in no
// constraint are pinned at their lower bound instead of enumerated. Throws
// InputError when the box exceeds the dimension or combination limits, or an
// integer variable has no range.
SolveResult brute_force_oracle(const LinearProblem& problem, std::span<const IntegerRange> ranges);

}  // namespace aevplan
