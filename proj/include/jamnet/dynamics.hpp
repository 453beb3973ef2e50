// dynamics.hpp -- alternating best-response play between the network and the jammer.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jamnet/bilp.hpp"
#include "jamnet/game.hpp"
#include "jamnet/model.hpp"

namespace jamnet::dynamics {

struct PlayRound {
  game::AssociationStrategy x;
  game::JammerStrategy v;
  double leader_payoff = 0.0;  // recorded after the jammer's reply
};

struct PlayTrace {
  std::vector<PlayRound> rounds;
  bool converged = false;              // last two (x, v) pairs identical
  std::optional<int> cycle_length;     // set only for period >= 2
  int rounds_run = 0;

  const PlayRound& last() const { return rounds.back(); }
};

// Round 0: the network moves first against a silent jammer (v = 0, or
// `init_v` when given), then the jammer best-responds; later rounds repeat
// the exchange. Stops early on a fixed point or a detected state cycle.
// Throws std::invalid_argument if max_rounds < 1 or init_v is malformed,
// and propagates solver node-limit failures.
PlayTrace fictitious_play(const model::Scenario& s, game::KnowledgeMode mode, int max_rounds,
                          const std::optional<BitVector>& init_v = std::nullopt,
                          const bilp::SolveOptions& opts = {});

// Smallest period p >= 1 such that the last 2p states repeat with period p.
// p = 1 is a fixed point. Empty when no periodic suffix fits in the trace.
std::optional<int> detect_cycle(const PlayTrace& trace);

// True iff the final (x, v) is a mutual best response: x attains the exact
// optimum of the network's program against v (within 1e-9) and v is the
// jammer's best response to x. Throws on an empty trace.
bool verify_fixed_point(const PlayTrace& trace, const model::Scenario& s,
                        game::KnowledgeMode mode, const bilp::SolveOptions& opts = {});

// CSV with header round,leader_payoff,n_victims,converged,cycle_length.
// Trace-level converged/cycle_length are repeated on every row so the file
// stands alone; cycle_length is blank when no cycle was found.
std::string trace_to_csv(const PlayTrace& trace);

}  // namespace jamnet::dynamics
