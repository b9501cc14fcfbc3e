#pragma once

// Textbook two-phase tableau simplex with Bland's rule on a dense matrix.
// Deliberately shares no code with the library solver; slow but simple, used
// only as an LP oracle on small problems.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aevplan/linear_problem.hpp"

namespace oracle {

struct DenseLpResult {
  enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
};

inline DenseLpResult dense_lp(const aevplan::LinearProblem& p) {
  using aevplan::Sense;
  constexpr double eps = 1e-10;
  const std::size_t n = p.variables.size();

  // Substitute x = l + x' (x' >= 0), or x = x+ - x- when l = -inf.
  struct Col { std::size_t var; double sign; };
  std::vector<Col> cols;
  std::vector<double> shift(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = p.variables[j];
    if (std::isfinite(v.lower)) {
      shift[j] = v.lower;
      cols.push_back({j, 1.0});
    } else {
      cols.push_back({j, 1.0});
      cols.push_back({j, -1.0});
    }
  }

  struct Row { std::vector<double> a; Sense sense; double rhs; };
  std::vector<Row> rows;
  for (const auto& c : p.constraints) {
    Row r{std::vector<double>(cols.size(), 0.0), c.sense, c.rhs};
    for (const auto& t : c.terms) {
      r.rhs -= t.coef * shift[t.var];
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k].var == t.var) r.a[k] += t.coef * cols[k].sign;
      }
    }
    rows.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = p.variables[j];
    if (!std::isfinite(v.upper)) continue;
    Row r{std::vector<double>(cols.size(), 0.0), Sense::LessEqual, v.upper - shift[j]};
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k].var == j) r.a[k] = cols[k].sign;
    }
    rows.push_back(std::move(r));
  }
  for (auto& r : rows) {
    if (r.rhs < 0) {
      for (double& x : r.a) x = -x;
      r.rhs = -r.rhs;
      if (r.sense == Sense::LessEqual) r.sense = Sense::GreaterEqual;
      else if (r.sense == Sense::GreaterEqual) r.sense = Sense::LessEqual;
    }
  }

  const std::size_t m = rows.size();
  const std::size_t nc = cols.size();
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::Equal) ++n_slack;
    if (r.sense != Sense::LessEqual) ++n_art;
  }
  const std::size_t width = nc + n_slack + n_art;
  std::vector<std::vector<double>> T(m, std::vector<double>(width + 1, 0.0));
  std::vector<std::size_t> basis(m);
  std::size_t s = nc, a = nc + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < nc; ++k) T[i][k] = rows[i].a[k];
    T[i][width] = rows[i].rhs;
    if (rows[i].sense == Sense::LessEqual) {
      T[i][s] = 1.0;
      basis[i] = s++;
    } else if (rows[i].sense == Sense::GreaterEqual) {
      T[i][s++] = -1.0;
      T[i][a] = 1.0;
      basis[i] = a++;
    } else {
      T[i][a] = 1.0;
      basis[i] = a++;
    }
  }

  auto pivot = [&](std::size_t r, std::size_t c) {
    const double pv = T[r][c];
    for (double& x : T[r]) x /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || T[i][c] == 0.0) continue;
      const double f = T[i][c];
      for (std::size_t k = 0; k <= width; ++k) T[i][k] -= f * T[r][k];
    }
    basis[r] = c;
  };

  // Dantzig pricing; Bland's rule once the objective stalls. Returns false when
  // unbounded.
  auto run = [&](const std::vector<double>& cost, std::size_t allowed) {
    int stalled = 0;
    for (int guard = 0; guard < 200000; ++guard) {
      std::optional<std::size_t> enter;
      double most = -1e-9;
      for (std::size_t k = 0; k < allowed; ++k) {
        double d = cost[k];
        for (std::size_t i = 0; i < m; ++i) d -= cost[basis[i]] * T[i][k];
        if (stalled > 50) {
          if (d < -1e-9) {
            enter = k;
            break;
          }
        } else if (d < most) {
          most = d;
          enter = k;
        }
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][*enter] <= eps) continue;
        const double ratio = T[i][width] / T[i][*enter];
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && leave && basis[i] < basis[*leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (!leave) return false;
      stalled = best <= 1e-12 ? stalled + 1 : 0;
      pivot(*leave, *enter);
    }
    throw std::runtime_error("dense_lp: iteration guard hit");
  };

  DenseLpResult out;
  std::vector<double> phase1(width, 0.0);
  for (std::size_t k = nc + n_slack; k < width; ++k) phase1[k] = 1.0;
  run(phase1, width);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= nc + n_slack) infeas += T[i][width];
  }
  if (infeas > 1e-7) return out;
  // Pivot remaining zero artificials out where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < nc + n_slack) continue;
    for (std::size_t k = 0; k < nc + n_slack; ++k) {
      if (std::abs(T[i][k]) > 1e-9) {
        pivot(i, k);
        break;
      }
    }
  }
  std::vector<double> phase2(width, 0.0);
  for (std::size_t k = 0; k < nc; ++k) phase2[k] = p.variables[cols[k].var].objective * cols[k].sign;
  if (!run(phase2, nc + n_slack)) {
    out.status = DenseLpResult::Status::Unbounded;
    return out;
  }
  std::vector<double> xc(width, 0.0);
  for (std::size_t i = 0; i < m; ++i) xc[basis[i]] = T[i][width];
  out.values = shift;
  for (std::size_t k = 0; k < nc; ++k) out.values[cols[k].var] += cols[k].sign * xc[k];
  out.objective = p.objective_value(out.values);
  out.status = DenseLpResult::Status::Optimal;
  return out;
}

}  // namespace oracle
