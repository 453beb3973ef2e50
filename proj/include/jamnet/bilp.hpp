// bilp.hpp -- exact 0-1 linear program solver (branch and bound over an LP
// relaxation) plus the exhaustive oracle used to test it.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jamnet::bilp {

enum class Sense { less_eq, greater_eq, equal };

struct Constraint {
  std::vector<std::pair<int, double>> coeffs;  // sparse (variable, coefficient)
  Sense sense = Sense::less_eq;
  double rhs = 0.0;
};

struct BinaryProgram {
  int num_vars = 0;
  std::vector<double> objective;  // maximized
  std::vector<Constraint> constraints;
  std::vector<std::string> var_names;  // optional, for dumps

  // Throws std::invalid_argument: num_vars < 1, objective size mismatch,
  // non-finite coefficients, out-of-range or duplicate variable indices.
  void validate() const;
};

enum class SolveStatus { optimal, infeasible, node_limit };

// One record per branch-and-bound node whose relaxation was solved.
struct SearchEvent {
  std::uint64_t node = 0;
  int depth = 0;
  double node_bound = 0.0;
  double incumbent = 0.0;       // meaningful only when has_incumbent
  bool has_incumbent = false;
};

struct SolveOptions {
  std::uint64_t node_limit = 10'000'000;
  double integrality_tol = 1e-6;
  double prune_tol = 1e-9;
  std::function<void(const SearchEvent&)> on_node;  // optional trace hook
};

struct BilpSolution {
  std::vector<int> assignment;  // empty when no feasible point was found
  double objective_value = -std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::infeasible;
  std::uint64_t nodes_explored = 0;
};

// Deterministic exact solve: the same program always returns the same optimal
// assignment. Among equal-value incumbents the search encounters, it keeps the
// one that precedes under prefer_assignment, but subtrees are fathomed once
// their bound cannot strictly improve, so with multiple optima the returned
// point is some optimum, not necessarily the order-minimal one.
BilpSolution solve(const BinaryProgram& p, const SolveOptions& opts = {});

// Enumerates all 2^num_vars assignments (num_vars <= 25) and returns the
// prefer_assignment-minimal optimum. The oracle for solve(): status always
// matches and objective values agree to solver tolerance; the assignments
// may differ (legitimately) when the optimum is not unique.
BilpSolution solve_brute_force(const BinaryProgram& p);

// Optimal value of the continuous relaxation over [0,1]^n; nullopt when the
// relaxation (hence the binary program) is infeasible.
std::optional<double> lp_relaxation_bound(const BinaryProgram& p);

// Total order over assignments used to break value ties deterministically:
// compare at the first differing variable index, where value 1 precedes iff
// that variable's objective coefficient is > 0 (a variable that cannot
// strictly improve the objective prefers 0). Returns true if `cand` precedes
// `inc`.
bool prefer_assignment(const std::vector<int>& cand, const std::vector<int>& inc,
                       const std::vector<double>& objective);

// LP-format-like plain-text dump for external cross-checking.
std::string to_lp_string(const BinaryProgram& p);

}  // namespace jamnet::bilp
