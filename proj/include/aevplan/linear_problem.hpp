#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace aevplan {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double objective = 0.0;
  bool integer = false;
};

struct Constraint {
  std::string name;
  Sense sense = Sense::GreaterEqual;
  double rhs = 0.0;
  std::vector<Term> terms;
};

// Minimization problem in sparse row form:
//   min objective_offset + sum_j c_j x_j
//   s.t. sum_j a_ij x_j (<=|>=|=) b_i,  l_j <= x_j <= u_j,  x_j integer if flagged.
struct LinearProblem {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  double objective_offset = 0.0;

  std::size_t add_variable(Variable v);
  std::size_t add_constraint(Constraint c);

  double objective_value(std::span<const double> values) const;
  double row_activity(std::size_t row, std::span<const double> values) const;
  // Amount by which the row is violated (0 when satisfied).
  double row_violation(std::size_t row, std::span<const double> values) const;
  std::vector<std::size_t> integer_variables() const;
};

// CPLEX LP text format (Minimize / Subject To / Bounds / General / End).
void write_lp_format(std::ostream& out, const LinearProblem& problem);

}  // namespace aevplan
