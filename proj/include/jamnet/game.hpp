// game.hpp -- coupling coefficients, both players' objectives, jammer best response.
#pragma once

#include <vector>

#include "jamnet/core.hpp"
#include "jamnet/model.hpp"

namespace jamnet::game {

// How much the jammer knows about the network when weighing a victim:
// a naive jammer assumes every non-jammed transmission succeeds; a learned
// jammer has estimated the true link statistics through the ack channel.
enum class KnowledgeMode { naive, learned };

KnowledgeMode mode_from_string(const std::string& name);
const char* mode_to_string(KnowledgeMode m);

struct GameCoefficients {
  // Per-link leader payoff is a[n][m]*v[n] + b[n][m] when x[n][m] = 1.
  Matrix a;            // N x M, <= 0 entrywise
  Matrix b;            // N x M, in [0,1]
  Matrix delta_tilde;  // N x M, jammer-perceived per-link loss, <= 0
  std::vector<double> rho;  // N, per-victim power cost weight
  double lambda = 0.0;
  KnowledgeMode knowledge_mode = KnowledgeMode::learned;

  int num_sensors() const { return a.rows; }
  int num_gateways() const { return a.cols; }
};

struct JammerStrategy {
  BitVector v;  // length N, victim flags
};

struct AssociationStrategy {
  BitMatrix x;  // N x M
  BitVector y;  // length M, gateway on/off

  // Throws std::invalid_argument unless entries are 0/1, every row of x sums
  // to at most 1, and x[n][m] <= y[m].
  void validate() const;
};

// Builds all coefficient tables from clamped link probabilities. Throws if
// any link would get a > 0 (unclamped input) or lambda/omega are negative.
GameCoefficients coefficients(const model::LinkProbabilities& lp, KnowledgeMode mode,
                              double lambda, double omega);

// w[n] = sum_m delta_tilde[n][m] * x[n][m]; each entry lies in [-M, 0].
std::vector<double> jammer_weight(const AssociationStrategy& x, const GameCoefficients& gc);

// v[n] = 1 iff w[n] + lambda*rho[n] <= 0. The tie at exactly zero jams.
JammerStrategy jammer_best_response(const AssociationStrategy& x, const GameCoefficients& gc);

// Expected successfully delivered packets per round: sum (a v + b) x.
double leader_payoff(const AssociationStrategy& x, const JammerStrategy& v,
                     const GameCoefficients& gc);

// sum_n w[n] v[n] + lambda * sum_n rho[n] v[n]; the jammer minimizes this.
double jammer_objective(const JammerStrategy& v, const AssociationStrategy& x,
                        const GameCoefficients& gc);

}  // namespace jamnet::game
