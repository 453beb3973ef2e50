// stackelberg.cpp
#include "jamnet/stackelberg.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace jamnet::stackelberg {

namespace {

constexpr double kTol = 1e-9;

std::string idx_name(const char* stem, int n, int m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%d_%d", stem, n + 1, m + 1);
  return buf;
}

std::string idx_name(const char* stem, int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%d", stem, k + 1);
  return buf;
}

// Shared leader-side rows (1-1)..(1-4). x vars at n*M+m, y vars at NM+m.
void append_p1_rows(bilp::BinaryProgram& p, const model::Scenario& s, int N, int M) {
  for (int n = 0; n < N; ++n) {  // each sensor associates at most once
    bilp::Constraint c;
    for (int m = 0; m < M; ++m) c.coeffs.push_back({n * M + m, 1.0});
    c.sense = bilp::Sense::less_eq;
    c.rhs = 1.0;
    p.constraints.push_back(std::move(c));
  }
  for (int m = 0; m < M; ++m) {  // gateway capacity
    bilp::Constraint c;
    for (int n = 0; n < N; ++n) c.coeffs.push_back({n * M + m, 1.0});
    c.sense = bilp::Sense::less_eq;
    c.rhs = static_cast<double>(s.gn_capacity[m]);
    p.constraints.push_back(std::move(c));
  }
  {  // activation budget
    bilp::Constraint c;
    for (int m = 0; m < M; ++m) c.coeffs.push_back({N * M + m, s.gn_cost[m]});
    c.sense = bilp::Sense::less_eq;
    c.rhs = s.budget;
    p.constraints.push_back(std::move(c));
  }
  for (int n = 0; n < N; ++n) {  // association only through a powered gateway
    for (int m = 0; m < M; ++m) {
      bilp::Constraint c;
      c.coeffs = {{n * M + m, 1.0}, {N * M + m, -1.0}};
      c.sense = bilp::Sense::less_eq;
      c.rhs = 0.0;
      p.constraints.push_back(std::move(c));
    }
  }
}

game::AssociationStrategy extract_association(const std::vector<int>& sol, int N, int M) {
  game::AssociationStrategy xs;
  xs.x = BitMatrix(N, M);
  xs.y.resize(M);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) xs.x.at(n, m) = static_cast<std::uint8_t>(sol[n * M + m]);
  for (int m = 0; m < M; ++m) xs.y[m] = static_cast<std::uint8_t>(sol[N * M + m]);
  return xs;
}

}  // namespace

bilp::BinaryProgram build_p1(const game::GameCoefficients& gc, const game::JammerStrategy& v,
                             const model::Scenario& s) {
  s.validate();
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  if (N != s.num_sensors() || M != s.num_gateways()) {
    throw std::invalid_argument("build_p1: coefficient/scenario size mismatch");
  }
  if (static_cast<int>(v.v.size()) != N) {
    throw std::invalid_argument("build_p1: victim vector size mismatch");
  }

  bilp::BinaryProgram p;
  p.num_vars = N * M + M;
  p.objective.assign(p.num_vars, 0.0);
  p.var_names.resize(p.num_vars);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      p.objective[n * M + m] = gc.a.at(n, m) * v.v[n] + gc.b.at(n, m);
      p.var_names[n * M + m] = idx_name("x", n, m);
    }
  }
  for (int m = 0; m < M; ++m) p.var_names[N * M + m] = idx_name("y", m);

  append_p1_rows(p, s, N, M);
  return p;
}

bilp::BinaryProgram build_ilp_se(const game::GameCoefficients& gc, const model::Scenario& s) {
  s.validate();
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  if (N != s.num_sensors() || M != s.num_gateways()) {
    throw std::invalid_argument("build_ilp_se: coefficient/scenario size mismatch");
  }
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      if (gc.a.at(n, m) > 0.0) {
        throw std::invalid_argument(
            "build_ilp_se: positive jamming gain a[n][m]; clamp the link model");
      }
    }
  }

  const int x0 = 0, y0 = N * M, v0 = N * M + M, z0 = N * M + M + N;
  bilp::BinaryProgram p;
  p.num_vars = 2 * N * M + N + M;
  p.objective.assign(p.num_vars, 0.0);
  p.var_names.resize(p.num_vars);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      p.objective[x0 + n * M + m] = gc.b.at(n, m);
      p.objective[z0 + n * M + m] = gc.a.at(n, m);
      p.var_names[x0 + n * M + m] = idx_name("x", n, m);
      p.var_names[z0 + n * M + m] = idx_name("z", n, m);
    }
    p.var_names[v0 + n] = idx_name("v", n);
  }
  for (int m = 0; m < M; ++m) p.var_names[y0 + m] = idx_name("y", m);

  append_p1_rows(p, s, N, M);

  // Activation: the victim flag turns on whenever the jammer's perceived
  // gain beats the power cost, i.e. v_n >= -lambda*rho_n - sum delta*x.
  for (int n = 0; n < N; ++n) {
    bilp::Constraint c;
    c.coeffs.push_back({v0 + n, -1.0});
    for (int m = 0; m < M; ++m) c.coeffs.push_back({x0 + n * M + m, -gc.delta_tilde.at(n, m)});
    c.sense = bilp::Sense::less_eq;
    c.rhs = gc.lambda * gc.rho[n];
    p.constraints.push_back(std::move(c));
  }
  // z <= (x+v)/2 kills z unless both factors are on ...
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      bilp::Constraint c;
      c.coeffs = {{z0 + n * M + m, 1.0}, {x0 + n * M + m, -0.5}, {v0 + n, -0.5}};
      c.sense = bilp::Sense::less_eq;
      c.rhs = 0.0;
      p.constraints.push_back(std::move(c));
    }
  }
  // ... and z >= v+x-1 forces it when they are.
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      bilp::Constraint c;
      c.coeffs = {{v0 + n, 1.0}, {x0 + n * M + m, 1.0}, {z0 + n * M + m, -1.0}};
      c.sense = bilp::Sense::less_eq;
      c.rhs = 1.0;
      p.constraints.push_back(std::move(c));
    }
  }
  return p;
}

Equilibrium solve_equilibrium(const model::Scenario& s, game::KnowledgeMode mode,
                              const bilp::SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const model::LinkProbabilities lp = model::compute_link_probabilities(s);
  const game::GameCoefficients gc = game::coefficients(lp, mode, s.lambda, s.jam_power);
  const bilp::BinaryProgram prog = build_ilp_se(gc, s);

  const bilp::BilpSolution sol = bilp::solve(prog, opts);
  if (sol.status == bilp::SolveStatus::node_limit) {
    throw NodeLimitError("solve_equilibrium: node limit exhausted");
  }
  if (sol.status != bilp::SolveStatus::optimal) {
    // x=y=v=z=0 satisfies every row, so the program cannot be infeasible.
    throw std::logic_error("solve_equilibrium: program reported infeasible");
  }

  const int N = s.num_sensors();
  const int M = s.num_gateways();
  Equilibrium eq;
  eq.x_star = extract_association(sol.assignment, N, M);
  eq.v_star = game::jammer_best_response(eq.x_star, gc);
  eq.z_star = BitMatrix(N, M);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m)
      eq.z_star.at(n, m) = static_cast<std::uint8_t>(eq.v_star.v[n] & eq.x_star.x.at(n, m));

  eq.leader_payoff = game::leader_payoff(eq.x_star, eq.v_star, gc);
  eq.jammer_objective = game::jammer_objective(eq.v_star, eq.x_star, gc);
  if (std::abs(eq.leader_payoff - sol.objective_value) > kTol) {
    throw std::runtime_error(
        "solve_equilibrium: linearized objective disagrees with the replayed payoff");
  }

  eq.solver_stats.nodes_explored = sol.nodes_explored;
  eq.solver_stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return eq;
}

Equilibrium brute_force_stackelberg(const game::GameCoefficients& gc, const model::Scenario& s) {
  s.validate();
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  if (N * M + M > 22) {
    throw std::invalid_argument("brute_force_stackelberg: leader space too large");
  }

  // Tie-break coefficients mirror the equilibrium program's [x, y] slice.
  std::vector<double> lead_coef(N * M + M, 0.0);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) lead_coef[n * M + m] = gc.b.at(n, m);

  auto flatten = [&](const game::AssociationStrategy& xs) {
    std::vector<int> flat(N * M + M);
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < M; ++m) flat[n * M + m] = xs.x.at(n, m);
    for (int m = 0; m < M; ++m) flat[N * M + m] = xs.y[m];
    return flat;
  };

  // Odometer over per-sensor choices: 0 = idle, else gateway index + 1.
  std::vector<int> choice(N, 0);
  std::vector<int> load(M, 0);
  bool has_best = false;
  Equilibrium best;
  std::vector<int> best_flat;
  std::uint64_t enumerated = 0;

  while (true) {
    ++enumerated;
    bool feasible = true;
    std::fill(load.begin(), load.end(), 0);
    double cost = 0.0;
    game::AssociationStrategy xs;
    xs.x = BitMatrix(N, M);
    xs.y.assign(M, 0);
    for (int n = 0; n < N && feasible; ++n) {
      if (choice[n] == 0) continue;
      const int m = choice[n] - 1;
      xs.x.at(n, m) = 1;
      if (!xs.y[m]) {
        xs.y[m] = 1;
        cost += s.gn_cost[m];
      }
      if (++load[m] > s.gn_capacity[m]) feasible = false;
    }
    if (feasible && cost > s.budget + kTol) feasible = false;

    if (feasible) {
      const game::JammerStrategy v = game::jammer_best_response(xs, gc);
      const double payoff = game::leader_payoff(xs, v, gc);
      std::vector<int> flat = flatten(xs);
      bool take = false;
      if (!has_best || payoff > best.leader_payoff + kTol) {
        take = true;
      } else if (payoff >= best.leader_payoff - kTol &&
                 bilp::prefer_assignment(flat, best_flat, lead_coef)) {
        take = true;
      }
      if (take) {
        const double kept = has_best ? std::max(best.leader_payoff, payoff) : payoff;
        best.x_star = xs;
        best.v_star = v;
        best.z_star = BitMatrix(N, M);
        for (int n = 0; n < N; ++n)
          for (int m = 0; m < M; ++m)
            best.z_star.at(n, m) = static_cast<std::uint8_t>(v.v[n] & xs.x.at(n, m));
        best.leader_payoff = kept;
        best.jammer_objective = game::jammer_objective(v, xs, gc);
        best_flat = std::move(flat);
        has_best = true;
      }
    }

    int pos = N - 1;
    while (pos >= 0 && choice[pos] == M) choice[pos--] = 0;
    if (pos < 0) break;
    ++choice[pos];
  }

  // The idle association is always feasible, so a maximizer exists.
  best.solver_stats.nodes_explored = enumerated;
  best.solver_stats.wall_ms = 0.0;
  best.leader_payoff = game::leader_payoff(best.x_star, best.v_star, gc);
  return best;
}

VerificationReport verify_equilibrium(const Equilibrium& eq, const game::GameCoefficients& gc,
                                      const model::Scenario& s) {
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  VerificationReport rep;

  {  // (i) leader feasibility: binary entries, row sums, capacity, budget, x<=y
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
      int row = 0;
      for (int m = 0; m < M; ++m) {
        const int xv = eq.x_star.x.at(n, m);
        if (xv != 0 && xv != 1) worst = std::max(worst, 1.0);
        if (xv > eq.x_star.y[m]) worst = std::max(worst, 1.0);
        row += xv;
      }
      worst = std::max(worst, static_cast<double>(row - 1));
    }
    for (int m = 0; m < M; ++m) {
      const int yv = eq.x_star.y[m];
      if (yv != 0 && yv != 1) worst = std::max(worst, 1.0);
      int load = 0;
      for (int n = 0; n < N; ++n) load += eq.x_star.x.at(n, m);
      worst = std::max(worst, static_cast<double>(load - s.gn_capacity[m]));
    }
    double cost = 0.0;
    for (int m = 0; m < M; ++m) cost += s.gn_cost[m] * eq.x_star.y[m];
    worst = std::max(worst, cost - s.budget);
    rep.checks.push_back({"leader-feasibility", worst <= kTol, std::max(worst, 0.0)});
  }

  {  // (ii) z = v*x entrywise
    int bad = 0;
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < M; ++m)
        if (eq.z_star.at(n, m) != (eq.v_star.v[n] & eq.x_star.x.at(n, m))) ++bad;
    rep.checks.push_back({"victim-association-product", bad == 0, static_cast<double>(bad)});
  }

  // Checks (iii) and (iv) recompute through the game helpers, which refuse a
  // structurally invalid association. The verifier must report, not throw, so
  // such input marks the check failed with an infinite residual.
  constexpr double kInfResid = std::numeric_limits<double>::infinity();

  {  // (iii) v is exactly the follower's best response (tie jams)
    try {
      const game::JammerStrategy want = game::jammer_best_response(eq.x_star, gc);
      int bad = 0;
      for (int n = 0; n < N; ++n)
        if (want.v[n] != eq.v_star.v[n]) ++bad;
      rep.checks.push_back({"follower-best-response", bad == 0, static_cast<double>(bad)});
    } catch (const std::invalid_argument&) {
      rep.checks.push_back({"follower-best-response", false, kInfResid});
    }
  }

  {  // (iv) stored payoffs match a fresh recomputation
    try {
      const double lp = game::leader_payoff(eq.x_star, eq.v_star, gc);
      const double jo = game::jammer_objective(eq.v_star, eq.x_star, gc);
      const double resid =
          std::max(std::abs(lp - eq.leader_payoff), std::abs(jo - eq.jammer_objective));
      rep.checks.push_back({"payoff-recompute", resid <= kTol, resid});
    } catch (const std::invalid_argument&) {
      rep.checks.push_back({"payoff-recompute", false, kInfResid});
    }
  }

  return rep;
}

std::string equilibrium_to_json(const Equilibrium& eq, const VerificationReport& report) {
  using nlohmann::json;
  const int N = eq.x_star.x.rows;
  const int M = eq.x_star.x.cols;

  json j;
  j["x"] = json::array();
  j["z"] = json::array();
  for (int n = 0; n < N; ++n) {
    json xrow = json::array(), zrow = json::array();
    for (int m = 0; m < M; ++m) {
      xrow.push_back(static_cast<int>(eq.x_star.x.at(n, m)));
      zrow.push_back(static_cast<int>(eq.z_star.at(n, m)));
    }
    j["x"].push_back(std::move(xrow));
    j["z"].push_back(std::move(zrow));
  }
  j["y"] = json::array();
  for (int m = 0; m < M; ++m) j["y"].push_back(static_cast<int>(eq.x_star.y[m]));
  j["v"] = json::array();
  for (int n = 0; n < N; ++n) j["v"].push_back(static_cast<int>(eq.v_star.v[n]));
  j["leader_payoff"] = eq.leader_payoff;
  j["jammer_objective"] = eq.jammer_objective;
  j["verification"] = {{"passed", report.all_passed()}, {"checks", json::array()}};
  for (const auto& c : report.checks) {
    j["verification"]["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}});
  }
  j["solver_stats"] = {{"nodes_explored", eq.solver_stats.nodes_explored},
                       {"wall_ms", eq.solver_stats.wall_ms}};
  return j.dump(2) + "\n";
}

}  // namespace jamnet::stackelberg
