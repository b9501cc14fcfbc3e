#pragma once

#include <span>

#include "aevplan/solver.hpp"

namespace aevplan::detail {

// LP relaxation of `problem` with the variable bounds replaced by
// (lower, upper). Used by branch and bound and the oracle to avoid copying
// the problem for every node.
SolveResult solve_relaxation(const LinearProblem& problem, std::span<const double> lower,
                             std::span<const double> upper);

}  // namespace aevplan::detail
