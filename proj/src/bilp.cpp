// bilp.cpp -- branch and bound over the bounded-variable simplex, plus the
// Gray-code exhaustive oracle.
#include "jamnet/bilp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>

#include "jamnet/simplex.hpp"

namespace jamnet::bilp {

namespace {
// Integral-candidate residual tolerance. For rows of a few hundred O(1)
// coefficients the plain double sum carries at most ~1e-13 of roundoff, while
// data-driven violations (e.g. a jam threshold missed by 1e-10) must be
// treated as real: 1e-11 separates the two regimes. Looser values let
// branch-and-bound accept points that break a tightly-scaled row and claim
// super-optimal objectives.
constexpr double kFeasTol = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Residual feasibility of a binary assignment, checked in exact arithmetic
// terms (plain double sums, tolerance kFeasTol).
bool feasible_exact(const BinaryProgram& p, const std::vector<int>& x) {
  for (const Constraint& c : p.constraints) {
    double lhs = 0.0;
    for (const auto& [j, coef] : c.coeffs) lhs += coef * x[j];
    switch (c.sense) {
      case Sense::less_eq:
        if (lhs > c.rhs + kFeasTol) return false;
        break;
      case Sense::greater_eq:
        if (lhs < c.rhs - kFeasTol) return false;
        break;
      case Sense::equal:
        if (std::abs(lhs - c.rhs) > kFeasTol) return false;
        break;
    }
  }
  return true;
}

double objective_of(const BinaryProgram& p, const std::vector<int>& x) {
  double obj = 0.0;
  for (int j = 0; j < p.num_vars; ++j) obj += p.objective[j] * x[j];
  return obj;
}

struct Node {
  double bound = kInf;  // parent relaxation value, upper bound on the subtree
  int depth = 0;
  std::uint64_t seq = 0;
  std::vector<std::int8_t> fixed;  // -1 free, else 0/1
};

// Best bound first; equal bounds go deeper first; remaining ties are LIFO.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq < b.seq;
  }
};

}  // namespace

void BinaryProgram::validate() const {
  if (num_vars < 1) throw std::invalid_argument("bilp: program needs at least one variable");
  if (static_cast<int>(objective.size()) != num_vars) {
    throw std::invalid_argument("bilp: objective size != num_vars");
  }
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("bilp: non-finite objective coefficient");
  }
  for (const Constraint& c : constraints) {
    if (static_cast<int>(c.coeffs.size()) > num_vars) {
      throw std::invalid_argument("bilp: constraint arity exceeds num_vars");
    }
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("bilp: non-finite rhs");
    std::vector<bool> seen(num_vars, false);
    for (const auto& [j, coef] : c.coeffs) {
      if (j < 0 || j >= num_vars) throw std::invalid_argument("bilp: variable index out of range");
      if (seen[j]) throw std::invalid_argument("bilp: duplicate variable in constraint");
      seen[j] = true;
      if (!std::isfinite(coef)) throw std::invalid_argument("bilp: non-finite coefficient");
    }
  }
}

bool prefer_assignment(const std::vector<int>& cand, const std::vector<int>& inc,
                       const std::vector<double>& objective) {
  const size_t n = cand.size();
  for (size_t j = 0; j < n; ++j) {
    if (cand[j] == inc[j]) continue;
    const int preferred = objective[j] > 0.0 ? 1 : 0;
    return cand[j] == preferred;
  }
  return false;  // identical
}

BilpSolution solve(const BinaryProgram& p, const SolveOptions& opts) {
  p.validate();
  const int n = p.num_vars;

  simplex::SimplexSolver lp_solver;
  std::vector<double> lb(n), ub(n);
  auto solve_rel = [&](const std::vector<std::int8_t>& fixed) {
    for (int j = 0; j < n; ++j) {
      lb[j] = fixed[j] == 1 ? 1.0 : 0.0;
      ub[j] = fixed[j] == 0 ? 0.0 : 1.0;
    }
    return lp_solver.solve(n, p.objective, p.constraints, lb, ub);
  };

  // Per-variable pseudocosts: mean relaxation-bound decrease per unit of
  // rounded-away fractional mass, one ledger per direction. A variable is
  // probed (both children's relaxations solved once, outside the node count)
  // the first time it comes up fractional; later nodes reuse the estimates.
  std::vector<double> pc_sum[2] = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<int> pc_cnt[2] = {std::vector<int>(n, 0), std::vector<int>(n, 0)};

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::uint64_t seq = 0;
  open.push(Node{kInf, 0, seq++, std::vector<std::int8_t>(n, -1)});

  BilpSolution out;
  bool has_inc = false;
  std::vector<int> inc_assign;
  double inc_value = -kInf;
  std::uint64_t explored = 0;
  bool limit_hit = false;

  std::vector<int> cand(n);
  auto offer_incumbent = [&](std::vector<int>& point) {
    const double val = objective_of(p, point);
    if (!has_inc || val > inc_value + opts.prune_tol) {
      has_inc = true;
      inc_assign = point;
      inc_value = val;
    } else if (val >= inc_value - opts.prune_tol &&
               prefer_assignment(point, inc_assign, p.objective)) {
      inc_assign = point;
      inc_value = std::max(inc_value, val);
    }
  };

  while (!open.empty() && !limit_hit) {
    Node node = open.top();
    open.pop();
    // Bound ties stay open so the preference order is applied across the
    // optima this search surfaces. Integral relaxations still fathom their
    // subtree, so this does not enumerate the full optimal set.
    if (has_inc && node.bound < inc_value - opts.prune_tol) continue;

    // Plunge: while no incumbent exists, dive straight into one child per
    // level (the other is queued) so pruning starts as early as possible.
    bool descend = true;
    while (descend) {
      descend = false;
      if (explored >= opts.node_limit) {
        limit_hit = true;
        break;
      }
      ++explored;

      const simplex::LpResult rel = solve_rel(node.fixed);
      if (rel.status == simplex::LpStatus::infeasible) break;
      if (opts.on_node) {
        opts.on_node(SearchEvent{explored, node.depth, rel.objective, inc_value, has_inc});
      }
      if (has_inc && rel.objective < inc_value - opts.prune_tol) break;

      int branch = -1;
      bool any_fractional = false;
      for (int j = 0; j < n && !any_fractional; ++j) {
        any_fractional = std::abs(rel.x[j] - std::round(rel.x[j])) > opts.integrality_tol;
      }

      if (!any_fractional) {
        for (int j = 0; j < n; ++j) cand[j] = rel.x[j] >= 0.5 ? 1 : 0;
        if (feasible_exact(p, cand)) {
          offer_incumbent(cand);
          break;
        }
        // Rounding within the integrality tolerance broke a tight constraint.
        // Branch on the least integral free variable to restore exactness.
        double worst = -1.0;
        for (int j = 0; j < n; ++j) {
          if (node.fixed[j] != -1) continue;
          const double dist_int = std::abs(rel.x[j] - std::round(rel.x[j]));
          if (dist_int > worst) {
            worst = dist_int;
            branch = j;
          }
        }
        if (branch < 0) break;  // everything fixed yet infeasible: dead end
      } else {
        // Cheap rounding heuristic: an integral snapshot of this relaxation
        // sometimes lands feasible and seeds the incumbent early.
        for (int j = 0; j < n; ++j) cand[j] = rel.x[j] >= 0.5 ? 1 : 0;
        if (feasible_exact(p, cand)) offer_incumbent(cand);
      }

      // Child relaxation values discovered by probing, keyed by direction;
      // -inf marks a child proven infeasible, NaN an unprobed one.
      double known[2] = {std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN()};

      if (branch < 0) {
        // Probe every never-probed fractional variable once, then score all
        // fractional candidates by the product of their estimated per-child
        // bound decreases (reliability branching).
        double best_score = -1.0;
        double best_known[2] = {0.0, 0.0};
        for (int j = 0; j < n; ++j) {
          const double f = rel.x[j];
          if (std::abs(f - std::round(f)) <= opts.integrality_tol) continue;
          const double dist[2] = {f, 1.0 - f};
          double gain[2];
          double child_val[2];
          if (pc_cnt[0][j] == 0 || pc_cnt[1][j] == 0) {
            for (int dir = 0; dir < 2; ++dir) {
              node.fixed[j] = static_cast<std::int8_t>(dir);
              const simplex::LpResult probe = solve_rel(node.fixed);
              node.fixed[j] = -1;
              if (probe.status == simplex::LpStatus::infeasible) {
                gain[dir] = kInf;
                child_val[dir] = -kInf;
              } else {
                const double g = std::max(0.0, rel.objective - probe.objective);
                gain[dir] = g;
                child_val[dir] = probe.objective;
                pc_sum[dir][j] += g / std::max(dist[dir], 1e-6);
                pc_cnt[dir][j] += 1;
              }
            }
          } else {
            for (int dir = 0; dir < 2; ++dir) {
              gain[dir] = (pc_sum[dir][j] / pc_cnt[dir][j]) * dist[dir];
              child_val[dir] = std::numeric_limits<double>::quiet_NaN();
            }
          }
          const double score = std::max(gain[0], 1e-6) * std::max(gain[1], 1e-6);
          if (score > best_score) {
            best_score = score;
            branch = j;
            best_known[0] = child_val[0];
            best_known[1] = child_val[1];
          }
        }
        known[0] = best_known[0];
        known[1] = best_known[1];
        if (branch < 0) break;  // numerically integral after all: dead end
      }

      // Child bounds: the probe value when available, else this relaxation.
      auto child_bound = [&](int dir) {
        return std::isnan(known[dir]) ? rel.objective : known[dir];
      };
      auto admissible = [&](int dir) {
        if (known[dir] == -kInf) return false;  // probed infeasible
        return !has_inc || child_bound(dir) >= inc_value - opts.prune_tol;
      };

      const int pref = p.objective[branch] > 0.0 ? 1 : 0;
      if (!has_inc) {
        // Descend toward the relaxation's suggestion; queue the sibling.
        int dive_dir = rel.x[branch] >= 0.5 ? 1 : 0;
        if (!admissible(dive_dir) && admissible(1 - dive_dir)) dive_dir = 1 - dive_dir;
        if (admissible(1 - dive_dir)) {
          Node side;
          side.bound = child_bound(1 - dive_dir);
          side.depth = node.depth + 1;
          side.seq = seq++;
          side.fixed = node.fixed;
          side.fixed[branch] = static_cast<std::int8_t>(1 - dive_dir);
          open.push(std::move(side));
        }
        if (admissible(dive_dir)) {
          node.bound = child_bound(dive_dir);
          node.depth += 1;
          node.seq = seq++;
          node.fixed[branch] = static_cast<std::int8_t>(dive_dir);
          descend = true;
        }
      } else {
        for (int value : {1 - pref, pref}) {  // preferred child pushed last
          if (!admissible(value)) continue;
          Node child;
          child.bound = child_bound(value);
          child.depth = node.depth + 1;
          child.seq = seq++;
          child.fixed = node.fixed;
          child.fixed[branch] = static_cast<std::int8_t>(value);
          open.push(std::move(child));
        }
      }
    }
  }

  out.nodes_explored = explored;
  if (limit_hit) {
    out.status = SolveStatus::node_limit;
    if (has_inc) {
      out.assignment = std::move(inc_assign);
      out.objective_value = inc_value;
    }
    return out;
  }
  if (!has_inc) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  out.status = SolveStatus::optimal;
  out.assignment = std::move(inc_assign);
  out.objective_value = objective_of(p, out.assignment);
  return out;
}

BilpSolution solve_brute_force(const BinaryProgram& p) {
  p.validate();
  const int n = p.num_vars;
  if (n > 25) throw std::invalid_argument("solve_brute_force: more than 25 variables");

  // Per-variable constraint incidence for O(column) Gray-code updates.
  std::vector<std::vector<std::pair<int, double>>> touching(n);
  const int m = static_cast<int>(p.constraints.size());
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, coef] : p.constraints[i].coeffs) touching[j].push_back({i, coef});
  }

  std::vector<double> lhs(m, 0.0);
  std::vector<int> viol_state(m, 0);
  int violated = 0;
  auto row_violated = [&](int i) {
    const Constraint& c = p.constraints[i];
    switch (c.sense) {
      case Sense::less_eq: return lhs[i] > c.rhs + kFeasTol;
      case Sense::greater_eq: return lhs[i] < c.rhs - kFeasTol;
      default: return std::abs(lhs[i] - c.rhs) > kFeasTol;
    }
  };
  for (int i = 0; i < m; ++i) {
    viol_state[i] = row_violated(i) ? 1 : 0;
    violated += viol_state[i];
  }

  std::vector<int> x(n, 0);
  double obj = 0.0;
  bool has_best = false;
  std::vector<int> best;
  double best_obj = -kInf;

  auto consider = [&]() {
    if (violated != 0) return;
    if (!has_best || obj > best_obj + kFeasTol) {
      has_best = true;
      best = x;
      best_obj = obj;
    } else if (obj >= best_obj - kFeasTol && prefer_assignment(x, best, p.objective)) {
      best = x;
      best_obj = std::max(best_obj, obj);
    }
  };

  consider();  // all-zero point
  const std::uint64_t total = 1ULL << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const int j = std::countr_zero(gray ^ next_gray);
    gray = next_gray;
    const int delta = x[j] ? -1 : 1;
    x[j] += delta;
    obj += delta * p.objective[j];
    for (const auto& [i, coef] : touching[j]) {
      lhs[i] += delta * coef;
      const int now = row_violated(i) ? 1 : 0;
      violated += now - viol_state[i];
      viol_state[i] = now;
    }
    consider();
  }

  BilpSolution out;
  out.nodes_explored = total;
  if (!has_best) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  out.status = SolveStatus::optimal;
  out.assignment = std::move(best);
  out.objective_value = objective_of(p, out.assignment);
  return out;
}

std::optional<double> lp_relaxation_bound(const BinaryProgram& p) {
  p.validate();
  simplex::SimplexSolver lp_solver;
  const std::vector<double> lb(p.num_vars, 0.0), ub(p.num_vars, 1.0);
  const simplex::LpResult rel = lp_solver.solve(p.num_vars, p.objective, p.constraints, lb, ub);
  if (rel.status == simplex::LpStatus::infeasible) return std::nullopt;
  return rel.objective;
}

namespace {
std::string var_label(const BinaryProgram& p, int j) {
  if (j < static_cast<int>(p.var_names.size()) && !p.var_names[j].empty()) return p.var_names[j];
  char buf[24];
  std::snprintf(buf, sizeof buf, "x%d", j + 1);
  return buf;
}

void append_term(std::string& s, double coef, const std::string& name) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " %+.17g %s", coef, name.c_str());
  s += buf;
}
}  // namespace

std::string to_lp_string(const BinaryProgram& p) {
  p.validate();
  std::string s = "\\ binary program dump\nMaximize\n obj:";
  for (int j = 0; j < p.num_vars; ++j) append_term(s, p.objective[j], var_label(p, j));
  s += "\nSubject To\n";
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const Constraint& c = p.constraints[i];
    char head[32];
    std::snprintf(head, sizeof head, " c%zu:", i + 1);
    s += head;
    for (const auto& [j, coef] : c.coeffs) append_term(s, coef, var_label(p, j));
    const char* rel = c.sense == Sense::less_eq ? "<=" : (c.sense == Sense::greater_eq ? ">=" : "=");
    char tail[48];
    std::snprintf(tail, sizeof tail, " %s %.17g\n", rel, c.rhs);
    s += tail;
  }
  s += "Binaries\n";
  for (int j = 0; j < p.num_vars; ++j) s += " " + var_label(p, j);
  s += "\nEnd\n";
  return s;
}

}  // namespace jamnet::bilp
