// simplex.hpp -- bounded-variable primal simplex for the LP relaxations.
//
// Solves  max c.x  s.t.  A x {<=,>=,=} b,  lb <= x <= ub  with finite
// structural bounds. Two phases: artificial columns are added only for rows
// whose slack cannot absorb the initial residual. Dantzig pricing with a
// permanent in-phase switch to Bland's rule once the objective stalls, so
// cycling cannot occur. All state lives in the solver object and is reused
// across calls; a solver instance is single-threaded.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace jamnet::bilp {
struct Constraint;  // see bilp.hpp
}

namespace jamnet::simplex {

enum class LpStatus { optimal, infeasible };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;  // structural values, size num_vars
  int iterations = 0;
};

class SimplexSolver {
 public:
  LpResult solve(int num_vars, const std::vector<double>& objective,
                 const std::vector<bilp::Constraint>& rows, const std::vector<double>& lb,
                 const std::vector<double>& ub);

 private:
  enum class ColState : std::uint8_t { basic, at_lower, at_upper };

  // Runs simplex iterations on the current tableau with objective `cost_`.
  // Returns false if the iteration cap was hit (treated as an internal error
  // by the caller).
  bool iterate(const std::function<double()>& audit_hook = {});

  double reduced_cost(int col) const;
  void pivot(int row, int col);

  // tableau geometry
  int n_ = 0;       // structural columns
  int m_ = 0;       // rows
  int ncols_ = 0;   // column capacity n_ + 2*m_; doubles as the tableau stride
  int enterable_ = 0;  // columns eligible to enter (excludes artificials in phase 2)

  std::vector<double> tab_;    // m_ x ncols_, row-major: B^-1 [A I E]
  std::vector<double> dee_;    // reduced costs, size ncols_
  std::vector<double> cost_;   // phase objective, size ncols_
  std::vector<double> lo_, hi_;  // bounds per column (slacks may be +-inf)
  std::vector<double> val_;    // current value per column (basic mirrors beta)
  std::vector<ColState> state_;
  std::vector<int> basis_;     // size m_, column basic in each row
  int iterations_ = 0;

  double& at(int r, int c) { return tab_[static_cast<size_t>(r) * ncols_ + c]; }
  double at(int r, int c) const { return tab_[static_cast<size_t>(r) * ncols_ + c]; }
};

}  // namespace jamnet::simplex
