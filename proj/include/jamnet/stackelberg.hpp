// stackelberg.hpp -- the single-level exact equilibrium program and its oracle.
//
// The follower's best response is a threshold rule, so the bilevel game
// collapses to one 0-1 program: keep the leader's constraints, add an
// activation row per sensor that forces the victim flag above threshold, and
// link products z = v*x with two rows per link. Solving that program and
// reading x,z back yields the equilibrium.
#pragma once

#include <cstdint>
#include <string>

#include "jamnet/bilp.hpp"
#include "jamnet/game.hpp"
#include "jamnet/model.hpp"

namespace jamnet::stackelberg {

struct SolverStats {
  std::uint64_t nodes_explored = 0;
  double wall_ms = 0.0;
};

struct Equilibrium {
  game::AssociationStrategy x_star;  // x and gateway switches y
  game::JammerStrategy v_star;
  BitMatrix z_star;                  // z[n][m] = v[n]*x[n][m]
  double leader_payoff = 0.0;
  double jammer_objective = 0.0;
  SolverStats solver_stats;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Raised when the underlying solver gives up on its node budget.
struct NodeLimitError : std::runtime_error {
  explicit NodeLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Association program for a fixed victim vector. Variables [x.., y..]; rows:
// one-gateway-per-sensor, per-gateway capacity, activation budget, x<=y.
bilp::BinaryProgram build_p1(const game::GameCoefficients& gc, const game::JammerStrategy& v,
                             const model::Scenario& s);

// Equilibrium program. Variables [x (N*M), y (M), v (N), z (N*M)]; P1 rows
// plus per-sensor activation and the two z-linking rows per link.
// Throws if any gc.a entry is positive.
bilp::BinaryProgram build_ilp_se(const game::GameCoefficients& gc, const model::Scenario& s);

// Full pipeline: link probabilities -> coefficients -> program -> solve ->
// extract. v_star is the follower's best response to x_star (the program
// leaves victim flags free where they cannot affect the objective); the
// payoff recomputed from (x_star, v_star) is asserted to match the solver
// objective within 1e-9. Throws NodeLimitError if the solver hits its cap.
Equilibrium solve_equilibrium(const model::Scenario& s, game::KnowledgeMode mode,
                              const bilp::SolveOptions& opts = {});

// Exhaustive leader enumeration (N*M + M <= 22): every feasible association,
// follower replies with its best response, maximizer wins under the solver's
// tie-break order on the [x, y] vector.
Equilibrium brute_force_stackelberg(const game::GameCoefficients& gc, const model::Scenario& s);

// Independent re-check of an equilibrium object: leader constraints,
// z = v*x, v = best response, payoff recomputation.
VerificationReport verify_equilibrium(const Equilibrium& eq, const game::GameCoefficients& gc,
                                      const model::Scenario& s);

std::string equilibrium_to_json(const Equilibrium& eq, const VerificationReport& report);

}  // namespace jamnet::stackelberg
