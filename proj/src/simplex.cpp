#include "simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "aevplan/error.hpp"

namespace aevplan {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  if (!(mip_relative_gap > 0.0)) throw InputError("mip_relative_gap must be > 0");
  if (!(integrality_tolerance > 0.0)) throw InputError("integrality_tolerance must be > 0");
  if (!(time_limit_seconds > 0.0)) throw InputError("time_limit_seconds must be > 0");
  if (node_limit < 1) throw InputError("node_limit must be >= 1");
}

namespace detail {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-12;

enum class Status : unsigned char { Basic, AtLower, AtUpper, Free };

// Presolve result: which original rows/columns survive and the values of
// columns fixed along the way.
struct Reduction {
  std::vector<double> lower, upper;
  std::vector<char> row_active;
  std::vector<char> col_fixed;  // value = lower
  std::vector<int> col_index;   // original -> reduced column, -1 when removed
  std::vector<int> row_index;   // original -> reduced row
  std::vector<std::size_t> cols, rows;
  bool infeasible = false;
  bool unbounded = false;
};

bool is_fixed(double lo, double hi) {
  return std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kZeroTol * std::max(1.0, std::abs(lo));
}

// Singleton rows become bounds, rows over fixed columns fold into the rhs,
// forcing rows fix their columns, empty columns go to their cheapest bound.
Reduction presolve(const LinearProblem& p, std::span<const double> lower, std::span<const double> upper) {
  const std::size_t n = p.variables.size();
  const std::size_t m = p.constraints.size();
  Reduction r;
  r.lower.assign(lower.begin(), lower.end());
  r.upper.assign(upper.begin(), upper.end());
  r.row_active.assign(m, 1);
  r.col_fixed.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (r.lower[j] > r.upper[j] + kFeasTol * std::max(1.0, std::abs(r.lower[j]))) {
      r.infeasible = true;
      return r;
    }
    if (is_fixed(r.lower[j], r.upper[j])) {
      r.col_fixed[j] = 1;
      r.upper[j] = r.lower[j];
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (!r.row_active[i]) continue;
      const Constraint& c = p.constraints[i];
      double rhs = c.rhs;
      std::optional<Term> single;
      int active_terms = 0;
      double scale = std::abs(c.rhs);
      for (const Term& t : c.terms) {
        if (t.coef == 0.0) continue;
        if (r.col_fixed[t.var]) {
          rhs -= t.coef * r.lower[t.var];
          scale = std::max(scale, std::abs(t.coef * r.lower[t.var]));
        } else {
          ++active_terms;
          single = t;
        }
      }
      const double tol = kFeasTol * std::max(1.0, scale) * 10.0;
      if (active_terms == 0) {
        const bool ok = c.sense == Sense::LessEqual      ? rhs >= -tol
                        : c.sense == Sense::GreaterEqual ? rhs <= tol
                                                         : std::abs(rhs) <= tol;
        if (!ok) {
          r.infeasible = true;
          return r;
        }
        r.row_active[i] = 0;
        changed = true;
        continue;
      }
      if (active_terms > 1) {
        // Activity range over the free columns: infeasible rows and forcing rows.
        double min_act = 0.0, max_act = 0.0;
        for (const Term& t : c.terms) {
          if (t.coef == 0.0 || r.col_fixed[t.var]) continue;
          min_act += t.coef * (t.coef > 0.0 ? r.lower[t.var] : r.upper[t.var]);
          max_act += t.coef * (t.coef > 0.0 ? r.upper[t.var] : r.lower[t.var]);
        }
        const bool caps = c.sense != Sense::GreaterEqual, floors = c.sense != Sense::LessEqual;
        if ((caps && min_act > rhs + tol) || (floors && max_act < rhs - tol)) {
          r.infeasible = true;
          return r;
        }
        const bool at_min = caps && std::isfinite(min_act) && min_act >= rhs - tol;
        const bool at_max = floors && std::isfinite(max_act) && max_act <= rhs + tol;
        if (!at_min && !at_max) continue;
        for (const Term& t : c.terms) {
          if (t.coef == 0.0 || r.col_fixed[t.var]) continue;
          const bool low = (t.coef > 0.0) == at_min;
          const double v = low ? r.lower[t.var] : r.upper[t.var];
          r.lower[t.var] = r.upper[t.var] = v;
          r.col_fixed[t.var] = 1;
        }
        r.row_active[i] = 0;
        changed = true;
        continue;
      }
      const std::size_t j = single->var;
      const double bound = rhs / single->coef;
      const bool upper_bound = (c.sense == Sense::LessEqual) == (single->coef > 0.0);
      if (c.sense == Sense::Equal) {
        r.lower[j] = std::max(r.lower[j], bound);
        r.upper[j] = std::min(r.upper[j], bound);
      } else if (upper_bound) {
        r.upper[j] = std::min(r.upper[j], bound);
      } else {
        r.lower[j] = std::max(r.lower[j], bound);
      }
      const double btol = kFeasTol * std::max(1.0, std::abs(bound)) * 10.0;
      if (r.lower[j] > r.upper[j] + btol) {
        r.infeasible = true;
        return r;
      }
      if (r.lower[j] > r.upper[j] || is_fixed(r.lower[j], r.upper[j])) {
        r.col_fixed[j] = 1;
        // Equality rows pin the exact value; otherwise stay on the tighter bound.
        const double v = c.sense == Sense::Equal ? bound : std::clamp(bound, r.upper[j], r.lower[j]);
        r.lower[j] = r.upper[j] = v;
      }
      r.row_active[i] = 0;
      changed = true;
    }
  }

  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!r.row_active[i]) continue;
    for (const Term& t : p.constraints[i].terms) {
      if (t.coef != 0.0) used[t.var] = 1;
    }
  }
  r.col_index.assign(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    if (r.col_fixed[j]) continue;
    if (!used[j]) {
      const double c = p.variables[j].objective;
      double v = 0.0;
      if (c > 0.0) {
        if (std::isinf(r.lower[j])) r.unbounded = true;
        v = r.lower[j];
      } else if (c < 0.0) {
        if (std::isinf(r.upper[j])) r.unbounded = true;
        v = r.upper[j];
      } else {
        v = std::isfinite(r.lower[j]) ? r.lower[j] : (std::isfinite(r.upper[j]) ? r.upper[j] : 0.0);
      }
      r.col_fixed[j] = 1;
      r.lower[j] = r.upper[j] = v;
      continue;
    }
    r.col_index[j] = static_cast<int>(r.cols.size());
    r.cols.push_back(j);
  }
  r.row_index.assign(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (!r.row_active[i]) continue;
    r.row_index[i] = static_cast<int>(r.rows.size());
    r.rows.push_back(i);
  }
  return r;
}

// Bounded primal simplex on  A x + s = b  with an explicit dense basis inverse.
class Simplex {
 public:
  Simplex(const LinearProblem& p, const Reduction& red, bool careful = false) : careful_(careful) {
    m_ = red.rows.size();
    n_ = red.cols.size();
    const std::size_t total = n_ + 2 * m_;
    col_start_.assign(total + 1, 0);
    lower_.assign(total, 0.0);
    upper_.assign(total, 0.0);
    cost_.assign(total, 0.0);
    b_.assign(m_, 0.0);

    // Structural columns, gathered row-wise then transposed.
    std::vector<std::vector<std::pair<int, double>>> cols(n_);
    for (std::size_t ri = 0; ri < m_; ++ri) {
      const Constraint& c = p.constraints[red.rows[ri]];
      double rhs = c.rhs;
      for (const Term& t : c.terms) {
        if (t.coef == 0.0) continue;
        if (red.col_fixed[t.var]) {
          rhs -= t.coef * red.lower[t.var];
        } else {
          cols[static_cast<std::size_t>(red.col_index[t.var])].emplace_back(static_cast<int>(ri), t.coef);
        }
      }
      b_[ri] = rhs;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      auto& col = cols[j];
      std::sort(col.begin(), col.end());
      // Merge duplicate row entries.
      std::vector<std::pair<int, double>> merged;
      for (const auto& e : col) {
        if (!merged.empty() && merged.back().first == e.first) {
          merged.back().second += e.second;
        } else {
          merged.push_back(e);
        }
      }
      for (const auto& e : merged) {
        row_idx_.push_back(e.first);
        val_.push_back(e.second);
      }
      col_start_[j + 1] = row_idx_.size();
      const std::size_t orig = red.cols[j];
      lower_[j] = red.lower[orig];
      upper_[j] = red.upper[orig];
      cost_[j] = p.variables[orig].objective;
    }
    for (std::size_t ri = 0; ri < m_; ++ri) {
      row_idx_.push_back(static_cast<int>(ri));
      val_.push_back(1.0);
      col_start_[n_ + ri + 1] = row_idx_.size();
      switch (p.constraints[red.rows[ri]].sense) {
        case Sense::LessEqual: lower_[n_ + ri] = 0.0; upper_[n_ + ri] = kInfinity; break;
        case Sense::GreaterEqual: lower_[n_ + ri] = -kInfinity; upper_[n_ + ri] = 0.0; break;
        case Sense::Equal: lower_[n_ + ri] = 0.0; upper_[n_ + ri] = 0.0; break;
      }
    }
    // Artificial columns; their signs are fixed in initialize().
    for (std::size_t ri = 0; ri < m_; ++ri) {
      row_idx_.push_back(static_cast<int>(ri));
      val_.push_back(1.0);
      col_start_[n_ + m_ + ri + 1] = row_idx_.size();
    }
    cost_scale_ = 1.0;
    for (std::size_t j = 0; j < n_; ++j) cost_scale_ = std::max(cost_scale_, std::abs(cost_[j]));
    max_iterations_ = 100 * static_cast<std::int64_t>(m_ + n_) + 20000;
  }

  SolveStatus run() {
    initialize();
    if (m_ == 0) return optimal_over_bounds();

    // Phase I: minimize the sum of artificials.
    std::vector<double> phase1(cost_.size(), 0.0);
    for (std::size_t ri = 0; ri < m_; ++ri) phase1[n_ + m_ + ri] = 1.0;
    SolveStatus s = iterate(phase1, 1.0);
    if (s != SolveStatus::Optimal) return s == SolveStatus::Unbounded ? SolveStatus::NumericalFailure : s;
    double infeasibility = 0.0;
    double bscale = 1.0;
    for (double v : b_) bscale = std::max(bscale, std::abs(v));
    for (std::size_t ri = 0; ri < m_; ++ri) infeasibility += std::abs(x_[n_ + m_ + ri]);
    if (infeasibility > 1e-7 * bscale) return SolveStatus::Infeasible;

    for (std::size_t ri = 0; ri < m_; ++ri) {
      const std::size_t a = n_ + m_ + ri;
      lower_[a] = upper_[a] = 0.0;
      if (status_[a] != Status::Basic) {
        status_[a] = Status::AtLower;
        x_[a] = 0.0;
      }
    }
    drive_out_artificials();
    refactor();
    s = iterate(cost_, cost_scale_);
    if (s == SolveStatus::Optimal) compute_dual_residual();
    return s;
  }

  std::vector<double> structural_values() const { return {x_.begin(), x_.begin() + static_cast<long>(n_)}; }
  std::int64_t iterations() const { return iterations_; }
  double dual_residual() const { return dual_residual_; }

 private:
  // A column as a dense m-vector times the current inverse: B^{-1} a_j.
  Eigen::VectorXd ftran(std::size_t j) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      out += val_[k] * binv_.col(row_idx_[k]);
    }
    return out;
  }

  double column_dot(std::size_t j, const Eigen::VectorXd& y) const {
    double s = 0.0;
    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) s += val_[k] * y[row_idx_[k]];
    return s;
  }

  void initialize() {
    const std::size_t total = cost_.size();
    status_.assign(total, Status::AtLower);
    x_.assign(total, 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (std::isfinite(lower_[j])) {
        status_[j] = Status::AtLower;
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        status_[j] = Status::AtUpper;
        x_[j] = upper_[j];
      } else {
        status_[j] = Status::Free;
        x_[j] = 0.0;
      }
    }
    std::vector<double> resid = b_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) resid[static_cast<std::size_t>(row_idx_[k])] -= val_[k] * x_[j];
    }
    basis_.assign(m_, 0);
    binv_ = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    for (std::size_t ri = 0; ri < m_; ++ri) {
      const std::size_t s = n_ + ri;
      const std::size_t a = n_ + m_ + ri;
      // Slack basic when the residual is within its bounds; otherwise an artificial.
      if (resid[ri] >= lower_[s] && resid[ri] <= upper_[s]) {
        basis_[ri] = s;
        status_[s] = Status::Basic;
        x_[s] = resid[ri];
        lower_[a] = upper_[a] = 0.0;
        status_[a] = Status::AtLower;
        x_[a] = 0.0;
      } else {
        const double sign = resid[ri] >= 0.0 ? 1.0 : -1.0;
        val_[col_start_[a]] = sign;
        binv_(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(ri)) = sign;
        lower_[a] = 0.0;
        upper_[a] = kInfinity;
        basis_[ri] = a;
        status_[a] = Status::Basic;
        x_[a] = std::abs(resid[ri]);
      }
    }
  }

  SolveStatus optimal_over_bounds() {
    for (std::size_t j = 0; j < n_; ++j) {
      if (cost_[j] > 0.0 && std::isinf(lower_[j])) return SolveStatus::Unbounded;
      if (cost_[j] < 0.0 && std::isinf(upper_[j])) return SolveStatus::Unbounded;
      x_[j] = cost_[j] >= 0.0 ? (std::isfinite(lower_[j]) ? lower_[j] : upper_[j]) : upper_[j];
      if (!std::isfinite(x_[j])) x_[j] = 0.0;
    }
    return SolveStatus::Optimal;
  }

  bool refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t ri = 0; ri < m_; ++ri) {
      const std::size_t j = basis_[ri];
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        basis(row_idx_[k], static_cast<Eigen::Index>(ri)) = val_[k];
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-14)) return false;
    binv_ = lu.inverse();
    if (!binv_.allFinite()) return false;
    // Basic values from scratch.
    Eigen::VectorXd rhs(m);
    for (std::size_t ri = 0; ri < m_; ++ri) rhs[static_cast<Eigen::Index>(ri)] = b_[ri];
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      if (status_[j] == Status::Basic || x_[j] == 0.0) continue;
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) rhs[row_idx_[k]] -= val_[k] * x_[j];
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t ri = 0; ri < m_; ++ri) x_[basis_[ri]] = xb[static_cast<Eigen::Index>(ri)];
    since_refactor_ = 0;
    return true;
  }

  SolveStatus iterate(const std::vector<double>& cost, double scale) {
    const double opt_tol = 1e-7 * scale;
    const std::size_t total = cost.size();
    const std::size_t refactor_period = careful_ ? 20 : (m_ > 600 ? 400 : 150);
    const double recheck = careful_ ? 1e-2 : 1e-3;
    std::size_t degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    bool verified = false;
    for (;;) {
      if (iterations_ >= max_iterations_) return SolveStatus::Limit;
      if (since_refactor_ >= refactor_period && !refactor()) return SolveStatus::NumericalFailure;

      for (std::size_t ri = 0; ri < m_; ++ri) cb[static_cast<Eigen::Index>(ri)] = cost[basis_[ri]];
      const Eigen::VectorXd y = binv_.transpose() * cb;

      std::optional<std::size_t> entering;
      double best = 0.0;
      double entering_d = 0.0;
      for (std::size_t j = 0; j < total; ++j) {
        const Status st = status_[j];
        if (st == Status::Basic || lower_[j] == upper_[j]) continue;
        const double d = cost[j] - column_dot(j, y);
        const bool eligible = (st == Status::AtLower && d < -opt_tol) || (st == Status::AtUpper && d > opt_tol) ||
                              (st == Status::Free && std::abs(d) > opt_tol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          entering_d = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          entering_d = d;
        }
      }
      if (!entering) {
        // Confirm optimality on a fresh factorization before accepting.
        if (!verified && since_refactor_ > 0) {
          if (!refactor()) return SolveStatus::NumericalFailure;
          verified = true;
          continue;
        }
        return SolveStatus::Optimal;
      }
      verified = false;

      const std::size_t j = *entering;
      const double dir = entering_d < 0.0 ? 1.0 : -1.0;
      const Eigen::VectorXd alpha = ftran(j);
      // Entries this small relative to the column are update noise, not pivots.
      const double pivot_tol = std::max(kPivotTol, 1e-7 * alpha.cwiseAbs().maxCoeff());

      double theta = upper_[j] - lower_[j];  // bound flip; inf when either side is infinite
      std::optional<std::size_t> leave;
      double leave_pivot = 0.0;
      bool leave_to_upper = false;
      for (std::size_t ri = 0; ri < m_; ++ri) {
        const double a = dir * alpha[static_cast<Eigen::Index>(ri)];
        if (std::abs(a) <= pivot_tol) continue;
        const std::size_t bvar = basis_[ri];
        double t;
        bool to_upper;
        if (a > 0.0) {
          if (std::isinf(lower_[bvar])) continue;
          t = (x_[bvar] - lower_[bvar]) / a;
          to_upper = false;
        } else {
          if (std::isinf(upper_[bvar])) continue;
          t = (upper_[bvar] - x_[bvar]) / (-a);
          to_upper = true;
        }
        t = std::max(t, 0.0);
        bool take = false;
        if (!leave) {
          take = t < theta || std::isinf(theta) || t <= theta;
          if (t > theta) take = false;
        } else if (t < theta - kZeroTol) {
          take = true;
        } else if (t <= theta + kZeroTol) {
          take = bland ? basis_[ri] < basis_[*leave] : std::abs(a) > std::abs(leave_pivot);
        }
        if (take) {
          theta = t;
          leave = ri;
          leave_pivot = a;
          leave_to_upper = to_upper;
        }
      }
      if (std::isinf(theta)) return SolveStatus::Unbounded;
      // A small pivot on an aged inverse may be drift; recheck on a fresh factorization.
      if (leave && since_refactor_ > 0 && std::abs(leave_pivot) < recheck * alpha.cwiseAbs().maxCoeff()) {
        if (!refactor()) return SolveStatus::NumericalFailure;
        continue;
      }

      ++iterations_;
      ++since_refactor_;
      // Steps that barely move the objective count as degenerate.
      if (theta * std::abs(entering_d) <= 1e-9 * scale) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      x_[j] += dir * theta;
      if (theta != 0.0) {
        for (std::size_t ri = 0; ri < m_; ++ri) x_[basis_[ri]] -= dir * theta * alpha[static_cast<Eigen::Index>(ri)];
      }
      if (!leave) {
        status_[j] = status_[j] == Status::AtLower ? Status::AtUpper : Status::AtLower;
        x_[j] = status_[j] == Status::AtLower ? lower_[j] : upper_[j];
        continue;
      }
      const std::size_t r = *leave;
      const std::size_t out = basis_[r];
      status_[out] = leave_to_upper ? Status::AtUpper : Status::AtLower;
      x_[out] = leave_to_upper ? upper_[out] : lower_[out];
      if (lower_[out] == upper_[out]) status_[out] = Status::AtLower;
      basis_[r] = j;
      status_[j] = Status::Basic;
      pivot(r, alpha);
    }
  }

  void pivot(std::size_t r, const Eigen::VectorXd& alpha) {
    const auto ri = static_cast<Eigen::Index>(r);
    const double p = alpha[ri];
    binv_.row(ri) /= p;
    Eigen::VectorXd a = alpha;
    a[ri] = 0.0;
    const Eigen::RowVectorXd pivot_row = binv_.row(ri);
    binv_.noalias() -= a * pivot_row;
  }

  // Degenerate pivots that swap zero-valued artificials for real columns.
  void drive_out_artificials() {
    for (std::size_t ri = 0; ri < m_; ++ri) {
      if (basis_[ri] < n_ + m_) continue;
      const Eigen::RowVectorXd row = binv_.row(static_cast<Eigen::Index>(ri));
      std::optional<std::size_t> pick;
      double best = 1e-7;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (status_[j] == Status::Basic) continue;
        double v = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) v += val_[k] * row[row_idx_[k]];
        if (std::abs(v) > best) {
          best = std::abs(v);
          pick = j;
        }
      }
      if (!pick) continue;  // redundant row; the artificial stays basic at zero
      const Eigen::VectorXd alpha = ftran(*pick);
      const std::size_t out = basis_[ri];
      status_[out] = Status::AtLower;
      x_[out] = 0.0;
      basis_[ri] = *pick;
      status_[*pick] = Status::Basic;
      pivot(ri, alpha);
    }
  }

  void compute_dual_residual() {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t ri = 0; ri < m_; ++ri) cb[static_cast<Eigen::Index>(ri)] = cost_[basis_[ri]];
    const Eigen::VectorXd y = binv_.transpose() * cb;
    double worst = 0.0;
    for (std::size_t j = 0; j < cost_.size(); ++j) {
      if (status_[j] == Status::Basic || lower_[j] == upper_[j]) continue;
      const double d = cost_[j] - column_dot(j, y);
      double v = 0.0;
      if (status_[j] == Status::AtLower) v = std::max(0.0, -d);
      else if (status_[j] == Status::AtUpper) v = std::max(0.0, d);
      else v = std::abs(d);
      worst = std::max(worst, v);
    }
    dual_residual_ = worst / cost_scale_;
  }

  std::size_t m_ = 0, n_ = 0;
  std::vector<std::size_t> col_start_;
  std::vector<int> row_idx_;
  std::vector<double> val_;
  std::vector<double> lower_, upper_, cost_, b_, x_;
  std::vector<Status> status_;
  std::vector<std::size_t> basis_;
  Eigen::MatrixXd binv_;
  double cost_scale_ = 1.0;
  double dual_residual_ = 0.0;
  std::int64_t iterations_ = 0;
  std::int64_t max_iterations_ = 0;
  std::size_t since_refactor_ = 0;
  bool careful_ = false;
};

double primal_residual(const LinearProblem& p, std::span<const double> x, std::span<const double> lower,
                       std::span<const double> upper) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const double scale = std::max(1.0, std::abs(p.constraints[i].rhs));
    worst = std::max(worst, p.row_violation(i, x) / scale);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, (lower[j] - x[j]) / std::max(1.0, std::abs(lower[j])));
    worst = std::max(worst, (x[j] - upper[j]) / std::max(1.0, std::abs(upper[j])));
  }
  return worst;
}

}  // namespace

SolveResult solve_relaxation(const LinearProblem& problem, std::span<const double> lower,
                             std::span<const double> upper) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  Reduction red = presolve(problem, lower, upper);
  auto finish = [&](SolveStatus status) {
    result.report.status = status;
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  if (red.infeasible) return finish(SolveStatus::Infeasible);
  if (red.unbounded) return finish(SolveStatus::Unbounded);

  Simplex simplex(problem, red);
  SolveStatus status = simplex.run();
  result.report.iterations = simplex.iterations();
  if (status == SolveStatus::NumericalFailure) {
    // Second attempt with frequent refactoring and stricter pivots.
    simplex = Simplex(problem, red, true);
    status = simplex.run();
    result.report.iterations += simplex.iterations();
  }
  if (status != SolveStatus::Optimal) return finish(status);

  const std::vector<double> reduced = simplex.structural_values();
  result.values.assign(problem.variables.size(), 0.0);
  for (std::size_t j = 0; j < problem.variables.size(); ++j) {
    result.values[j] = red.col_index[j] >= 0 ? reduced[static_cast<std::size_t>(red.col_index[j])] : red.lower[j];
  }
  // Snap tiny bound violations left by the floating-point updates.
  for (std::size_t j = 0; j < result.values.size(); ++j) {
    double& v = result.values[j];
    if (v < lower[j] && v > lower[j] - 1e-9 * std::max(1.0, std::abs(lower[j]))) v = lower[j];
    if (v > upper[j] && v < upper[j] + 1e-9 * std::max(1.0, std::abs(upper[j]))) v = upper[j];
  }
  result.report.objective = problem.objective_value(result.values);
  result.report.best_bound = result.report.objective;
  result.report.relative_gap = 0.0;
  result.report.primal_residual = primal_residual(problem, result.values, lower, upper);
  result.report.dual_residual = simplex.dual_residual();
  if (result.report.primal_residual > 1e-6) return finish(SolveStatus::NumericalFailure);
  return finish(SolveStatus::Optimal);
}

}  // namespace detail

SolveResult solve_lp(const LinearProblem& problem) {
  std::vector<double> lower, upper;
  lower.reserve(problem.variables.size());
  upper.reserve(problem.variables.size());
  for (const Variable& v : problem.variables) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  return detail::solve_relaxation(problem, lower, upper);
}

}  // namespace aevplan
