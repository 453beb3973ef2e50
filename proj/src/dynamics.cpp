// dynamics.cpp
#include "jamnet/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "jamnet/rng.hpp"
#include "jamnet/stackelberg.hpp"

namespace jamnet::dynamics {

namespace {

constexpr double kTol = 1e-9;

std::uint64_t state_hash(const game::AssociationStrategy& x, const game::JammerStrategy& v) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  auto mixin = [&h](std::uint64_t w) { h = mix64(h ^ w); };
  for (std::uint8_t b : x.x.data) mixin(b);
  for (std::uint8_t b : x.y) mixin(b);
  for (std::uint8_t b : v.v) mixin(b);
  return h;
}

bool same_state(const PlayRound& a, const PlayRound& b) {
  return a.x.x == b.x.x && a.x.y == b.x.y && a.v.v == b.v.v;
}

// One exact leader move against a fixed victim set.
game::AssociationStrategy best_association(const game::GameCoefficients& gc,
                                           const game::JammerStrategy& v,
                                           const model::Scenario& s,
                                           const bilp::SolveOptions& opts, double* payoff_bound) {
  const bilp::BinaryProgram p = stackelberg::build_p1(gc, v, s);
  const bilp::BilpSolution sol = bilp::solve(p, opts);
  if (sol.status == bilp::SolveStatus::node_limit) {
    throw stackelberg::NodeLimitError("fictitious_play: node limit exhausted");
  }
  if (sol.status != bilp::SolveStatus::optimal) {
    throw std::logic_error("fictitious_play: association program reported infeasible");
  }
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  game::AssociationStrategy xs;
  xs.x = BitMatrix(N, M);
  xs.y.resize(M);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) xs.x.at(n, m) = static_cast<std::uint8_t>(sol.assignment[n * M + m]);
  for (int m = 0; m < M; ++m) xs.y[m] = static_cast<std::uint8_t>(sol.assignment[N * M + m]);
  if (payoff_bound) *payoff_bound = sol.objective_value;
  return xs;
}

}  // namespace

PlayTrace fictitious_play(const model::Scenario& s, game::KnowledgeMode mode, int max_rounds,
                          const std::optional<BitVector>& init_v,
                          const bilp::SolveOptions& opts) {
  if (max_rounds < 1) throw std::invalid_argument("fictitious_play: max_rounds must be >= 1");
  s.validate();
  const model::LinkProbabilities lp = model::compute_link_probabilities(s);
  const game::GameCoefficients gc = game::coefficients(lp, mode, s.lambda, s.jam_power);
  const int N = s.num_sensors();

  game::JammerStrategy v_prev;
  if (init_v) {
    if (static_cast<int>(init_v->size()) != N) {
      throw std::invalid_argument("fictitious_play: init victim vector has wrong length");
    }
    for (std::uint8_t b : *init_v) {
      if (b > 1) throw std::invalid_argument("fictitious_play: init victim entries must be 0/1");
    }
    v_prev.v = *init_v;
  } else {
    v_prev.v.assign(N, 0);
  }

  PlayTrace trace;
  trace.rounds.reserve(static_cast<size_t>(max_rounds));
  std::unordered_map<std::uint64_t, std::vector<int>> seen;  // hash -> round indices

  for (int r = 0; r < max_rounds; ++r) {
    PlayRound round;
    round.x = best_association(gc, v_prev, s, opts, nullptr);
    round.v = game::jammer_best_response(round.x, gc);
    round.leader_payoff = game::leader_payoff(round.x, round.v, gc);
    trace.rounds.push_back(std::move(round));
    const PlayRound& cur = trace.rounds.back();

    const std::uint64_t h = state_hash(cur.x, cur.v);
    int repeat_of = -1;
    if (auto it = seen.find(h); it != seen.end()) {
      for (int j : it->second) {
        if (same_state(trace.rounds[static_cast<size_t>(j)], cur)) {
          repeat_of = j;
          break;
        }
      }
    }
    seen[h].push_back(r);

    if (repeat_of >= 0) {
      const int period = r - repeat_of;
      if (period == 1) {
        trace.converged = true;
      } else {
        trace.cycle_length = period;
      }
      break;
    }
    v_prev = cur.v;
  }

  trace.rounds_run = static_cast<int>(trace.rounds.size());
  return trace;
}

std::optional<int> detect_cycle(const PlayTrace& trace) {
  const int R = static_cast<int>(trace.rounds.size());
  for (int p = 1; 2 * p <= R; ++p) {
    bool ok = true;
    for (int k = R - 2 * p; k < R - p && ok; ++k) {
      ok = same_state(trace.rounds[static_cast<size_t>(k)],
                      trace.rounds[static_cast<size_t>(k + p)]);
    }
    if (ok) return p;
  }
  return std::nullopt;
}

bool verify_fixed_point(const PlayTrace& trace, const model::Scenario& s,
                        game::KnowledgeMode mode, const bilp::SolveOptions& opts) {
  if (trace.rounds.empty()) throw std::invalid_argument("verify_fixed_point: empty trace");
  const model::LinkProbabilities lp = model::compute_link_probabilities(s);
  const game::GameCoefficients gc = game::coefficients(lp, mode, s.lambda, s.jam_power);
  const PlayRound& fin = trace.last();

  const game::JammerStrategy reply = game::jammer_best_response(fin.x, gc);
  if (reply.v != fin.v.v) return false;

  double optimum = 0.0;
  (void)best_association(gc, fin.v, s, opts, &optimum);
  const double achieved = game::leader_payoff(fin.x, fin.v, gc);
  return std::abs(achieved - optimum) <= kTol;
}

std::string trace_to_csv(const PlayTrace& trace) {
  std::string out = "round,leader_payoff,n_victims,converged,cycle_length\n";
  char buf[64];
  for (size_t r = 0; r < trace.rounds.size(); ++r) {
    const PlayRound& round = trace.rounds[r];
    int victims = 0;
    for (std::uint8_t b : round.v.v) victims += b;
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,%d,", r, round.leader_payoff, victims,
                  trace.converged ? 1 : 0);
    out += buf;
    if (trace.cycle_length) out += std::to_string(*trace.cycle_length);
    out += '\n';
  }
  return out;
}

}  // namespace jamnet::dynamics
