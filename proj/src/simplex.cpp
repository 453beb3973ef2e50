// simplex.cpp -- two-phase bounded-variable tableau simplex.
//
// Conventions. Columns 0..n-1 are structural, n..n+m-1 are slacks (one per
// row, coefficient +1), anything beyond are phase-1 artificials. Every row is
// stored as an equality  A x + s = b  with the inequality folded into the
// slack bounds: <= rows get s in [0,inf), >= rows s in (-inf,0], = rows
// s in [0,0]. Nonbasic columns sit at a finite bound; basic values are kept
// in val_ alongside and updated incrementally on every move, so the tableau
// itself never needs an rhs column.
#include "jamnet/simplex.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "jamnet/bilp.hpp"

namespace jamnet::simplex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-9;    // smallest usable pivot / direction coeff
constexpr double kOptTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kFeasTol = 1e-9;   // slack-residual feasibility tolerance
constexpr double kPhase1Tol = 1e-7; // remaining infeasibility that counts as zero
constexpr int kStallLimit = 64;     // Dantzig iterations without progress before Bland
}  // namespace

double SimplexSolver::reduced_cost(int col) const { return dee_[col]; }

void SimplexSolver::pivot(int row, int col) {
  const double piv = at(row, col);
  const double inv = 1.0 / piv;
  double* prow = &tab_[static_cast<size_t>(row) * ncols_];
  for (int j = 0; j < ncols_; ++j) prow[j] *= inv;
  prow[col] = 1.0;  // kill roundoff on the pivot itself

  for (int i = 0; i < m_; ++i) {
    if (i == row) continue;
    double* irow = &tab_[static_cast<size_t>(i) * ncols_];
    const double f = irow[col];
    if (f == 0.0) continue;
    for (int j = 0; j < ncols_; ++j) irow[j] -= f * prow[j];
    irow[col] = 0.0;
  }
  const double fd = dee_[col];
  if (fd != 0.0) {
    for (int j = 0; j < ncols_; ++j) dee_[j] -= fd * prow[j];
    dee_[col] = 0.0;
  }
}

bool SimplexSolver::iterate(const std::function<double()>& audit_hook) {
  const int iter_cap = 20000 + 64 * (m_ + ncols_);
  bool bland = false;
  int stall = 0;
  double last_obj = -kInf;

  auto objective_now = [&]() {
    double o = 0.0;
    for (int j = 0; j < ncols_; ++j) o += cost_[j] * val_[j];
    return o;
  };

  while (true) {
    if (++iterations_ > iter_cap) return false;

    // Entering column: improving direction among nonbasic enterable columns.
    int enter = -1;
    int dir = 0;  // +1 move up from lower bound, -1 move down from upper
    double best_score = kOptTol;
    for (int j = 0; j < enterable_; ++j) {
      if (state_[j] == ColState::basic) continue;
      const double d = dee_[j];
      if (state_[j] == ColState::at_lower && d > kOptTol && lo_[j] < hi_[j]) {
        if (bland) { enter = j; dir = +1; break; }
        if (d > best_score) { best_score = d; enter = j; dir = +1; }
      } else if (state_[j] == ColState::at_upper && d < -kOptTol && lo_[j] < hi_[j]) {
        if (bland) { enter = j; dir = -1; break; }
        if (-d > best_score) { best_score = -d; enter = j; dir = -1; }
      }
    }
    if (enter < 0) return true;  // optimal for this phase

    // Ratio test: largest step before the entering column or a basic column
    // hits a bound. Ties go to the lowest basic variable index, which is the
    // Bland-compatible leaving rule.
    double step = hi_[enter] - lo_[enter];  // entering bound-to-bound flip
    int leave_row = -1;
    for (int i = 0; i < m_; ++i) {
      const double coef = dir * at(i, enter);
      const int bi = basis_[i];
      double limit;
      if (coef > kPivTol) {  // basic value decreases toward its lower bound
        if (lo_[bi] == -kInf) continue;
        limit = (val_[bi] - lo_[bi]) / coef;
      } else if (coef < -kPivTol) {  // basic value increases toward upper
        if (hi_[bi] == kInf) continue;
        limit = (hi_[bi] - val_[bi]) / (-coef);
      } else {
        continue;
      }
      if (limit < 0.0) limit = 0.0;  // roundoff guard
      if (limit < step - 1e-12 ||
          (leave_row >= 0 && limit < step + 1e-12 && bi < basis_[leave_row])) {
        step = limit;
        leave_row = i;
      }
    }

    if (step == kInf) {
      throw std::runtime_error("simplex: unbounded improving direction (bad input scaling)");
    }
    const int leave_var = leave_row >= 0 ? basis_[leave_row] : -1;

    // Apply the move: entering value changes by dir*step, each basic value by
    // -dir*step*column_coefficient.
    if (step != 0.0) {
      val_[enter] += dir * step;
      for (int i = 0; i < m_; ++i) {
        const double coef = at(i, enter);
        if (coef != 0.0) val_[basis_[i]] -= dir * step * coef;
      }
    }

    if (leave_row < 0) {
      // Bound flip: entering column crossed to its other bound, basis unchanged.
      state_[enter] = dir > 0 ? ColState::at_upper : ColState::at_lower;
      val_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
    } else {
      const int leave = basis_[leave_row];
      // Snap the leaving variable onto the bound it hit.
      const double lcoef = dir * at(leave_row, enter);
      if (lcoef > 0.0) {
        state_[leave] = ColState::at_lower;
        val_[leave] = lo_[leave];
      } else {
        state_[leave] = ColState::at_upper;
        val_[leave] = hi_[leave];
      }
      state_[enter] = ColState::basic;
      basis_[leave_row] = enter;
      pivot(leave_row, enter);
    }

    if (audit_hook) {
      const double resid = audit_hook();
      if (resid > 1e-9)
        std::fprintf(stderr,
                     "audit[iter %d]: resid=%.3e enter=%d dir=%d step=%.6e leave_row=%d leave=%d\n",
                     iterations_, resid, enter, dir, step, leave_row, leave_var);
    }

    // Stall detection drives the permanent in-phase switch to Bland's rule.
    if (!bland) {
      const double obj = objective_now();
      if (obj > last_obj + 1e-12) {
        last_obj = obj;
        stall = 0;
      } else if (++stall >= kStallLimit) {
        bland = true;
      }
    }
  }
}

LpResult SimplexSolver::solve(int num_vars, const std::vector<double>& objective,
                              const std::vector<bilp::Constraint>& rows,
                              const std::vector<double>& lb, const std::vector<double>& ub) {
  n_ = num_vars;
  m_ = static_cast<int>(rows.size());
  const int base_cols = n_ + m_;
  iterations_ = 0;

  // Generous layout: every row may need an artificial in the worst case.
  const int cap_cols = base_cols + m_;
  tab_.assign(static_cast<size_t>(m_) * cap_cols, 0.0);
  lo_.assign(cap_cols, 0.0);
  hi_.assign(cap_cols, 0.0);
  val_.assign(cap_cols, 0.0);
  state_.assign(cap_cols, ColState::at_lower);
  basis_.assign(m_, -1);
  cost_.assign(cap_cols, 0.0);
  dee_.assign(cap_cols, 0.0);

  // ncols_ doubles as the tableau stride, so it must stay at the full
  // capacity for the whole solve. Unused artificial columns are all-zero
  // with bounds [0,0]: they can never enter a basis and cost only scan time.
  ncols_ = cap_cols;

  for (int j = 0; j < n_; ++j) {
    lo_[j] = lb[j];
    hi_[j] = ub[j];
    state_[j] = ColState::at_lower;
    val_[j] = lb[j];
  }

  const bool audit = std::getenv("SIMPLEX_AUDIT") != nullptr;
  std::vector<int> art_row(cap_cols, -1);
  std::vector<double> art_sign(cap_cols, 0.0);
  auto worst_resid = [&]() -> double {
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      double lhs = 0.0;
      for (const auto& [j, coef] : rows[i].coeffs) lhs += coef * val_[j];
      lhs += val_[n_ + i];
      for (int a = base_cols; a < cap_cols; ++a)
        if (art_row[a] == i) lhs += art_sign[a] * val_[a];
      worst = std::max(worst, std::abs(lhs - rows[i].rhs));
    }
    return worst;
  };
  auto audit_residual = [&](const char* tag) {
    if (!audit) return;
    std::fprintf(stderr, "audit[%s]: worst_row_resid=%.3e\n", tag, worst_resid());
  };
  const std::function<double()> hook = audit ? std::function<double()>(worst_resid)
                                             : std::function<double()>{};

  int n_artificial = 0;
  bool need_phase1 = false;
  for (int i = 0; i < m_; ++i) {
    const bilp::Constraint& c = rows[i];
    for (const auto& [j, coef] : c.coeffs) at(i, j) = coef;
    const int s = n_ + i;
    at(i, s) = 1.0;
    switch (c.sense) {
      case bilp::Sense::less_eq:    lo_[s] = 0.0;  hi_[s] = kInf; break;
      case bilp::Sense::greater_eq: lo_[s] = -kInf; hi_[s] = 0.0; break;
      case bilp::Sense::equal:      lo_[s] = 0.0;  hi_[s] = 0.0; break;
    }

    // Residual the slack would need to carry with structurals at their bounds.
    double beta = c.rhs;
    for (const auto& [j, coef] : c.coeffs) beta -= coef * val_[j];

    if (beta >= lo_[s] - kFeasTol && beta <= hi_[s] + kFeasTol) {
      basis_[i] = s;
      state_[s] = ColState::basic;
      val_[s] = beta;
    } else {
      // Park the slack at the violated side's bound and cover the difference
      // with an artificial column so phase 1 can repair it. Every basic column
      // must read +1 in its row (the initial basis is canonical; dee_, the
      // ratio test and the incremental value updates all rely on it), so when
      // the residual is negative the whole row is stored negated: a row is an
      // equation and scaling by -1 preserves it.
      const double target = beta < lo_[s] ? lo_[s] : hi_[s];
      state_[s] = (target == lo_[s]) ? ColState::at_lower : ColState::at_upper;
      val_[s] = target;
      const double resid = beta - target;
      const int a = base_cols + n_artificial++;
      art_row[a] = i;
      art_sign[a] = resid > 0.0 ? 1.0 : -1.0;
      if (resid < 0.0) {
        for (int j = 0; j < base_cols; ++j) at(i, j) = -at(i, j);
      }
      at(i, a) = 1.0;
      lo_[a] = 0.0;
      hi_[a] = kInf;
      basis_[i] = a;
      state_[a] = ColState::basic;
      val_[a] = std::abs(resid);
      need_phase1 = true;
    }
  }
  LpResult res;

  if (need_phase1) {
    // Phase 1: drive sum of artificials to zero (maximize their negative sum).
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int a = base_cols; a < ncols_; ++a) cost_[a] = -1.0;
    // Reduced costs: c - c_B^T T with the artificial basis rows.
    for (int j = 0; j < ncols_; ++j) dee_[j] = cost_[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) dee_[j] -= cb * at(i, j);
    }
    audit_residual("build");
    enterable_ = ncols_;  // artificials may re-enter during phase 1; harmless
    if (!iterate(hook)) throw std::runtime_error("simplex: phase-1 iteration cap hit");
    audit_residual("phase1-end");

    double infeas = 0.0;
    for (int a = base_cols; a < ncols_; ++a) infeas += val_[a];
    if (audit) {
      double abs_infeas = 0.0, neg = 0.0;
      for (int a = base_cols; a < ncols_; ++a) {
        abs_infeas += std::abs(val_[a]);
        neg = std::min(neg, val_[a]);
      }
      std::fprintf(stderr, "audit[phase1]: sum=%.3e sum_abs=%.3e most_negative=%.3e\n", infeas,
                   abs_infeas, neg);
    }
    if (infeas > kPhase1Tol) {
      res.status = LpStatus::infeasible;
      res.iterations = iterations_;
      return res;
    }

    // Pivot basic near-zero artificials out where possible. The strongest
    // available pivot keeps the value transfer val_a / T[i][repl] tiny.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < base_cols) continue;
      int repl = -1;
      double best = kPivTol;
      for (int j = 0; j < base_cols; ++j) {
        if (state_[j] == ColState::basic) continue;
        const double mag = std::abs(at(i, j));
        if (mag > best) {
          best = mag;
          repl = j;
        }
      }
      if (repl >= 0) {
        const int art = basis_[i];
        if (audit && std::abs(val_[art]) > 1e-12)
          std::fprintf(stderr, "audit[pivot-out]: art_val=%.3e pivot=%.3e transfer=%.3e\n",
                       val_[art], at(i, repl), val_[art] / at(i, repl));
        // Row identity transfers the artificial's residual value onto repl;
        // the move ripples through every other basic value like any step.
        const double delta = val_[art] / at(i, repl);
        val_[repl] += delta;
        if (delta != 0.0) {
          for (int k = 0; k < m_; ++k) {
            if (k == i) continue;
            const double coef = at(k, repl);
            if (coef != 0.0) val_[basis_[k]] -= delta * coef;
          }
        }
        state_[repl] = ColState::basic;
        basis_[i] = repl;
        pivot(i, repl);
        state_[art] = ColState::at_lower;
        val_[art] = 0.0;
      }
      // else: redundant row; the artificial stays basic pinned at 0 by its
      // bounds and an all-zero row, and can never block phase 2.
    }
    for (int a = base_cols; a < ncols_; ++a) hi_[a] = 0.0;  // lock artificials
  }

  // Phase 2 objective and fresh reduced costs.
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (int j = 0; j < n_; ++j) cost_[j] = objective[j];
  for (int j = 0; j < ncols_; ++j) dee_[j] = cost_[j];
  for (int i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j < ncols_; ++j) dee_[j] -= cb * at(i, j);
  }
  enterable_ = base_cols;  // artificials never re-enter
  if (!iterate(hook)) throw std::runtime_error("simplex: phase-2 iteration cap hit");
  audit_residual("phase2-end");

  res.status = LpStatus::optimal;
  res.x.assign(val_.begin(), val_.begin() + n_);
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += objective[j] * res.x[j];
  res.objective = obj;
  res.iterations = iterations_;
  return res;
}

}  // namespace jamnet::simplex
