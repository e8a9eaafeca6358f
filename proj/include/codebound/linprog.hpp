#ifndef CODEBOUND_LINPROG_HPP
#define CODEBOUND_LINPROG_HPP

// Dense two-phase tableau simplex. Sized for a few hundred variables and
// modest row counts; there is no sparse machinery.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "codebound/errors.hpp"

namespace codebound {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LinearConstraint {
  std::vector<double> row;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// minimize objective . x subject to constraints and lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower_bounds;  // -inf allowed
  std::vector<double> upper_bounds;  // +inf allowed

  LinearProgram() = default;

  /// Variables default to x >= 0.
  explicit LinearProgram(std::vector<double> c)
      : objective(std::move(c)),
        lower_bounds(objective.size(), 0.0),
        upper_bounds(objective.size(), std::numeric_limits<double>::infinity()) {}

  std::size_t num_variables() const { return objective.size(); }

  void add_constraint(std::vector<double> row, Relation relation, double rhs) {
    constraints.push_back({std::move(row), relation, rhs});
  }
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kUnbounded: return "unbounded";
    case LPStatus::kNumericalFailure: return "numerical failure";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::kNumericalFailure;
  std::vector<double> x;
  double objective_value = 0.0;
  double max_constraint_violation = 0.0;
  /// d(optimal value)/d(rhs_i) for each constraint, in the caller's orientation.
  std::vector<double> duals;
  std::size_t iterations = 0;
  std::string message;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  int bland_after_degenerate_streak = 20;
  std::size_t max_iterations = 0;  // 0 selects 50 * (rows + cols) + 1000
};

/// Largest amount by which x violates any constraint or bound of lp.
inline double max_constraint_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& c : lp.constraints) {
    long double lhs = 0.0L;
    for (std::size_t j = 0; j < c.row.size() && j < x.size(); ++j) lhs += static_cast<long double>(c.row[j]) * x[j];
    const double v = static_cast<double>(lhs) - c.rhs;
    switch (c.relation) {
      case Relation::kLessEqual: worst = std::max(worst, v); break;
      case Relation::kGreaterEqual: worst = std::max(worst, -v); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(v)); break;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j < lp.lower_bounds.size()) worst = std::max(worst, lp.lower_bounds[j] - x[j]);
    if (j < lp.upper_bounds.size()) worst = std::max(worst, x[j] - lp.upper_bounds[j]);
  }
  return worst;
}

namespace detail {

inline void validate_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  for (double c : lp.objective) {
    if (!std::isfinite(c)) throw StructuralError("objective entry is not finite");
  }
  if (lp.lower_bounds.size() != n || lp.upper_bounds.size() != n) {
    throw StructuralError("bound vectors must have one entry per variable");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lp.lower_bounds[j];
    const double u = lp.upper_bounds[j];
    if (std::isnan(l) || std::isnan(u) || l == std::numeric_limits<double>::infinity() ||
        u == -std::numeric_limits<double>::infinity()) {
      throw StructuralError("invalid bound on variable " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    if (c.row.size() != n) {
      throw StructuralError("constraint " + std::to_string(i) + " has " + std::to_string(c.row.size()) +
                            " entries, expected " + std::to_string(n));
    }
    if (!std::isfinite(c.rhs)) throw StructuralError("constraint " + std::to_string(i) + " rhs is not finite");
    for (double v : c.row) {
      if (!std::isfinite(v)) throw StructuralError("constraint " + std::to_string(i) + " has a non-finite entry");
    }
  }
}

// How an original variable is expressed through nonnegative tableau columns.
struct VariableMap {
  enum class Kind { kShift, kMirror, kFree } kind = Kind::kShift;
  double offset = 0.0;  // lower bound for kShift, upper bound for kMirror
  std::size_t column = 0;
  std::size_t column_neg = 0;  // kFree only
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), obj_(cols + 1, 0.0), basis_(rows, 0),
        active_(rows, true) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }
  double& obj(std::size_t j) { return obj_[j]; }
  double obj_rhs() const { return obj_[cols_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t basis(std::size_t i) const { return basis_[i]; }
  bool active(std::size_t i) const { return active_[i]; }
  void deactivate(std::size_t i) { active_[i] = false; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t e) {
    const std::size_t w = cols_ + 1;
    double* prow = &data_[r * w];
    const double inv = 1.0 / prow[e];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * w];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[e] = 0.0;
    }
    const double f = obj_[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < w; ++j) obj_[j] -= f * prow[j];
      obj_[e] = 0.0;
    }
    basis_[r] = e;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

// Minimizes the objective row over columns with allowed[j] set.
inline PhaseResult run_simplex(Tableau& t, const std::vector<bool>& allowed, const SimplexOptions& opt,
                               std::size_t max_iter, std::size_t& iterations) {
  int degenerate_streak = 0;
  while (true) {
    if (iterations >= max_iter) return PhaseResult::kIterationLimit;
    const bool bland = degenerate_streak >= opt.bland_after_degenerate_streak;

    std::size_t enter = t.cols();
    double best = -opt.optimality_tol;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!allowed[j]) continue;
      const double d = t.obj(j);
      if (d < best) {
        enter = j;
        best = d;
        if (bland) break;
      }
    }
    if (enter == t.cols()) return PhaseResult::kOptimal;

    std::size_t leave = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (!t.active(i)) continue;
      const double a = t.at(i, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leave == t.rows() || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
        const bool take = bland ? t.basis(i) < t.basis(leave) : a > t.at(leave, enter);
        if (take) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leave == t.rows()) return PhaseResult::kUnbounded;

    degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;
    t.pivot(leave, enter);
    ++iterations;
  }
}

}  // namespace detail

/// Two-phase simplex with Dantzig pricing, switching to Bland's rule after a
/// streak of degenerate pivots. Returns kNumericalFailure rather than an
/// answer that fails an independent feasibility check.
inline LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  using detail::VariableMap;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  detail::validate_lp(lp);
  const std::size_t n = lp.num_variables();

  // Nonnegative column variables.
  std::vector<VariableMap> vmap(n);
  std::size_t ncols_struct = 0;
  struct BoundRow {
    std::size_t column;
    double width;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lp.lower_bounds[j];
    const double u = lp.upper_bounds[j];
    auto& m = vmap[j];
    if (l > -kInf) {
      m.kind = VariableMap::Kind::kShift;
      m.offset = l;
      m.column = ncols_struct++;
      if (u < kInf) bound_rows.push_back({m.column, u - l});
    } else if (u < kInf) {
      m.kind = VariableMap::Kind::kMirror;
      m.offset = u;
      m.column = ncols_struct++;
    } else {
      m.kind = VariableMap::Kind::kFree;
      m.column = ncols_struct++;
      m.column_neg = ncols_struct++;
    }
  }

  // Standard-form rows over the column variables, with rhs >= 0.
  struct StdRow {
    std::vector<double> a;
    Relation rel;
    double b;
    bool negated = false;
    std::ptrdiff_t source = -1;  // constraint index, -1 for bound rows
  };
  std::vector<StdRow> srows;
  srows.reserve(lp.constraints.size() + bound_rows.size());
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    StdRow r{std::vector<double>(ncols_struct, 0.0), c.relation, c.rhs, false, static_cast<std::ptrdiff_t>(i)};
    for (std::size_t j = 0; j < n; ++j) {
      const double v = c.row[j];
      if (v == 0.0) continue;
      const auto& m = vmap[j];
      switch (m.kind) {
        case VariableMap::Kind::kShift:
          r.a[m.column] += v;
          r.b -= v * m.offset;
          break;
        case VariableMap::Kind::kMirror:
          r.a[m.column] -= v;
          r.b -= v * m.offset;
          break;
        case VariableMap::Kind::kFree:
          r.a[m.column] += v;
          r.a[m.column_neg] -= v;
          break;
      }
    }
    srows.push_back(std::move(r));
  }
  for (const auto& br : bound_rows) {
    StdRow r{std::vector<double>(ncols_struct, 0.0), Relation::kLessEqual, br.width, false, -1};
    r.a[br.column] = 1.0;
    srows.push_back(std::move(r));
  }
  for (auto& r : srows) {
    if (r.b < 0.0) {
      for (auto& v : r.a) v = -v;
      r.b = -r.b;
      r.negated = true;
      if (r.rel == Relation::kLessEqual) {
        r.rel = Relation::kGreaterEqual;
      } else if (r.rel == Relation::kGreaterEqual) {
        r.rel = Relation::kLessEqual;
      }
    }
  }

  // Column layout: structural | slack or surplus | artificial.
  const std::size_t m = srows.size();
  std::vector<std::ptrdiff_t> slack_col(m, -1);
  std::vector<std::ptrdiff_t> art_col(m, -1);
  std::size_t ncols = ncols_struct;
  for (std::size_t i = 0; i < m; ++i) {
    if (srows[i].rel != Relation::kEqual) slack_col[i] = static_cast<std::ptrdiff_t>(ncols++);
  }
  const std::size_t first_art = ncols;
  for (std::size_t i = 0; i < m; ++i) {
    if (srows[i].rel != Relation::kLessEqual) art_col[i] = static_cast<std::ptrdiff_t>(ncols++);
  }

  detail::Tableau t(m, ncols);
  double max_b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = srows[i];
    for (std::size_t j = 0; j < ncols_struct; ++j) t.at(i, j) = r.a[j];
    if (slack_col[i] >= 0) t.at(i, static_cast<std::size_t>(slack_col[i])) = r.rel == Relation::kLessEqual ? 1.0 : -1.0;
    if (art_col[i] >= 0) {
      t.at(i, static_cast<std::size_t>(art_col[i])) = 1.0;
      t.basis(i) = static_cast<std::size_t>(art_col[i]);
    } else {
      t.basis(i) = static_cast<std::size_t>(slack_col[i]);
    }
    t.rhs(i) = r.b;
    max_b = std::max(max_b, r.b);
  }
  for (const auto& c : lp.constraints) max_b = std::max(max_b, std::abs(c.rhs));

  LPSolution sol;
  const std::size_t max_iter = opt.max_iterations ? opt.max_iterations : 50 * (m + ncols) + 1000;
  std::size_t iterations = 0;

  // Phase 1: minimize the sum of artificials.
  if (first_art < ncols) {
    for (std::size_t i = 0; i < m; ++i) {
      if (art_col[i] < 0) continue;
      for (std::size_t j = 0; j < first_art; ++j) t.obj(j) -= t.at(i, j);
      t.obj(ncols) -= t.rhs(i);
    }
    std::vector<bool> allowed(ncols, true);
    const auto res = detail::run_simplex(t, allowed, opt, max_iter, iterations);
    if (res == detail::PhaseResult::kIterationLimit) {
      sol.status = LPStatus::kNumericalFailure;
      sol.message = "iteration limit reached in phase 1";
      sol.iterations = iterations;
      return sol;
    }
    const double infeasibility = -t.obj_rhs();
    if (infeasibility > opt.feasibility_tol * (1.0 + max_b)) {
      sol.status = LPStatus::kInfeasible;
      sol.iterations = iterations;
      sol.message = "phase 1 optimum " + std::to_string(infeasibility) + " > 0";
      return sol;
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) < first_art) continue;
      std::size_t best = ncols;
      double best_abs = opt.pivot_tol;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(t.at(i, j)) > best_abs) {
          best = j;
          best_abs = std::abs(t.at(i, j));
        }
      }
      if (best == ncols) {
        t.deactivate(i);
      } else {
        t.pivot(i, best);
        ++iterations;
      }
    }
  }

  // Phase 2 objective row: reduced costs c_j - c_B B^-1 A_j on every column.
  std::vector<double> cost(ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& mm = vmap[j];
    const double c = lp.objective[j];
    switch (mm.kind) {
      case VariableMap::Kind::kShift: cost[mm.column] += c; break;
      case VariableMap::Kind::kMirror: cost[mm.column] -= c; break;
      case VariableMap::Kind::kFree:
        cost[mm.column] += c;
        cost[mm.column_neg] -= c;
        break;
    }
  }
  for (std::size_t j = 0; j <= ncols; ++j) t.obj(j) = j < ncols ? cost[j] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!t.active(i)) continue;
    const double cb = cost[t.basis(i)];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= ncols; ++j) t.obj(j) -= cb * t.at(i, j);
  }
  {
    std::vector<bool> allowed(ncols, true);
    for (std::size_t j = first_art; j < ncols; ++j) allowed[j] = false;
    const auto res = detail::run_simplex(t, allowed, opt, max_iter, iterations);
    sol.iterations = iterations;
    if (res == detail::PhaseResult::kIterationLimit) {
      sol.status = LPStatus::kNumericalFailure;
      sol.message = "iteration limit reached in phase 2";
      return sol;
    }
    if (res == detail::PhaseResult::kUnbounded) {
      sol.status = LPStatus::kUnbounded;
      sol.message = "objective unbounded below";
      return sol;
    }
  }

  // Recover x.
  std::vector<double> col_value(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.active(i)) col_value[t.basis(i)] = std::max(t.rhs(i), 0.0);
  }
  sol.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& mm = vmap[j];
    switch (mm.kind) {
      case VariableMap::Kind::kShift: sol.x[j] = mm.offset + col_value[mm.column]; break;
      case VariableMap::Kind::kMirror: sol.x[j] = mm.offset - col_value[mm.column]; break;
      case VariableMap::Kind::kFree: sol.x[j] = col_value[mm.column] - col_value[mm.column_neg]; break;
    }
  }

  sol.duals.assign(lp.constraints.size(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = srows[i];
    if (r.source < 0 || !t.active(i)) continue;
    double y = 0.0;
    if (r.rel == Relation::kLessEqual) {
      y = -t.obj(static_cast<std::size_t>(slack_col[i]));
    } else if (r.rel == Relation::kGreaterEqual) {
      y = t.obj(static_cast<std::size_t>(slack_col[i]));
    } else {
      y = -t.obj(static_cast<std::size_t>(art_col[i]));
    }
    sol.duals[static_cast<std::size_t>(r.source)] = r.negated ? -y : y;
  }

  long double z = 0.0L;
  for (std::size_t j = 0; j < n; ++j) z += static_cast<long double>(lp.objective[j]) * sol.x[j];
  sol.objective_value = static_cast<double>(z);
  sol.max_constraint_violation = max_constraint_violation(lp, sol.x);
  if (sol.max_constraint_violation > opt.feasibility_tol * (1.0 + max_b)) {
    sol.status = LPStatus::kNumericalFailure;
    sol.message = "solution violates constraints by " + std::to_string(sol.max_constraint_violation);
    return sol;
  }
  sol.status = LPStatus::kOptimal;
  return sol;
}

}  // namespace codebound

#endif  // CODEBOUND_LINPROG_HPP
