#include "aevplan/linear_problem.hpp"

#include <cmath>
#include <ostream>

#include "aevplan/numeric.hpp"

namespace aevplan {

std::size_t LinearProblem::add_variable(Variable v) {
  variables.push_back(std::move(v));
  return variables.size() - 1;
}

std::size_t LinearProblem::add_constraint(Constraint c) {
  constraints.push_back(std::move(c));
  return constraints.size() - 1;
}

double LinearProblem::objective_value(std::span<const double> values) const {
  double obj = objective_offset;
  for (std::size_t j = 0; j < variables.size(); ++j) obj += variables[j].objective * values[j];
  return obj;
}

double LinearProblem::row_activity(std::size_t row, std::span<const double> values) const {
  double sum = 0.0;
  for (const Term& t : constraints[row].terms) sum += t.coef * values[t.var];
  return sum;
}

double LinearProblem::row_violation(std::size_t row, std::span<const double> values) const {
  const Constraint& c = constraints[row];
  const double lhs = row_activity(row, values);
  switch (c.sense) {
    case Sense::LessEqual: return std::max(0.0, lhs - c.rhs);
    case Sense::GreaterEqual: return std::max(0.0, c.rhs - lhs);
    case Sense::Equal: return std::abs(lhs - c.rhs);
  }
  return 0.0;
}

std::vector<std::size_t> LinearProblem::integer_variables() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < variables.size(); ++j) {
    if (variables[j].integer) out.push_back(j);
  }
  return out;
}

namespace {

// LP format lines are limited in length by some readers; wrap terms.
void write_terms(std::ostream& out, const LinearProblem& p, const std::vector<Term>& terms) {
  std::size_t col = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    std::string piece = (t.coef < 0 ? "- " : (first ? "" : "+ "));
    const double mag = std::abs(t.coef);
    if (mag != 1.0) piece += format_number(mag) + " ";
    piece += p.variables[t.var].name;
    if (col + piece.size() > 200) {
      out << "\n   ";
      col = 0;
    }
    out << ' ' << piece;
    col += piece.size() + 1;
    first = false;
  }
  if (first) out << " 0 " << (p.variables.empty() ? "x" : p.variables.front().name);
}

}  // namespace

void write_lp_format(std::ostream& out, const LinearProblem& p) {
  out << "\\ objective offset " << format_number(p.objective_offset) << "\n";
  out << "Minimize\n obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < p.variables.size(); ++j) {
    if (p.variables[j].objective != 0.0) obj.push_back({j, p.variables[j].objective});
  }
  write_terms(out, p, obj);
  out << "\nSubject To\n";
  for (const Constraint& c : p.constraints) {
    out << ' ' << c.name << ':';
    write_terms(out, p, c.terms);
    out << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ")
        << format_number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : p.variables) {
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << format_number(v.lower) << '\n';
    } else if (std::isinf(v.upper)) {
      if (v.lower != 0.0) out << ' ' << v.name << " >= " << format_number(v.lower) << '\n';
    } else {
      out << ' ' << format_number(v.lower) << " <= " << v.name << " <= " << format_number(v.upper) << '\n';
    }
  }
  bool any_int = false;
  for (const Variable& v : p.variables) {
    if (!v.integer) continue;
    if (!any_int) out << "General\n";
    any_int = true;
    out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

}  // namespace aevplan
