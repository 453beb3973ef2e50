// game.cpp
#include "jamnet/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jamnet::game {

KnowledgeMode mode_from_string(const std::string& name) {
  if (name == "naive") return KnowledgeMode::naive;
  if (name == "learned") return KnowledgeMode::learned;
  throw std::invalid_argument("unknown knowledge mode: " + name);
}

const char* mode_to_string(KnowledgeMode m) {
  return m == KnowledgeMode::naive ? "naive" : "learned";
}

void AssociationStrategy::validate() const {
  const int N = x.rows;
  const int M = x.cols;
  if (static_cast<int>(y.size()) != M) {
    throw std::invalid_argument("association: y size != gateway count");
  }
  for (int m = 0; m < M; ++m) {
    if (y[m] > 1) throw std::invalid_argument("association: y entries must be 0/1");
  }
  for (int n = 0; n < N; ++n) {
    int row = 0;
    for (int m = 0; m < M; ++m) {
      const auto e = x.at(n, m);
      if (e > 1) throw std::invalid_argument("association: x entries must be 0/1");
      if (e > y[m]) throw std::invalid_argument("association: x[n][m] > y[m]");
      row += e;
    }
    if (row > 1) throw std::invalid_argument("association: sensor associated to several gateways");
  }
}

GameCoefficients coefficients(const model::LinkProbabilities& lp, KnowledgeMode mode,
                              double lambda, double omega) {
  if (!(std::isfinite(lambda) && lambda >= 0.0)) {
    throw std::invalid_argument("coefficients: lambda must be >= 0");
  }
  if (!(std::isfinite(omega) && omega >= 0.0)) {
    throw std::invalid_argument("coefficients: omega must be >= 0");
  }
  const int N = lp.p_clear.rows;
  const int M = lp.p_clear.cols;

  GameCoefficients gc;
  gc.a = Matrix(N, M);
  gc.b = Matrix(N, M);
  gc.delta_tilde = Matrix(N, M);
  gc.rho.resize(N);
  gc.lambda = lambda;
  gc.knowledge_mode = mode;

  for (int n = 0; n < N; ++n) {
    const double pn = lp.p_detect[n];
    gc.rho[n] = pn * omega;
    for (int m = 0; m < M; ++m) {
      const double clear = lp.p_clear.at(n, m);
      const double jam = lp.p_jam.at(n, m);
      if (jam > clear) {
        throw std::invalid_argument(
            "coefficients: p_jam > p_clear (unclamped input would make a > 0)");
      }
      // Success of a jammed sensor mixes the two channel laws by detection:
      // detected with prob pn -> jammed law, undetected -> clear law.
      gc.a.at(n, m) = pn * (jam - clear);
      gc.b.at(n, m) = clear;
      gc.delta_tilde.at(n, m) =
          mode == KnowledgeMode::naive ? -1.0 : pn * lp.p_ack[m] * (jam - clear);
    }
  }
  return gc;
}

std::vector<double> jammer_weight(const AssociationStrategy& x, const GameCoefficients& gc) {
  x.validate();
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  std::vector<double> w(N, 0.0);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      if (x.x.at(n, m)) w[n] += gc.delta_tilde.at(n, m);
    }
  }
  return w;
}

JammerStrategy jammer_best_response(const AssociationStrategy& x, const GameCoefficients& gc) {
  const std::vector<double> w = jammer_weight(x, gc);
  const int N = gc.num_sensors();
  JammerStrategy js;
  js.v.resize(N);
  for (int n = 0; n < N; ++n) {
    js.v[n] = (w[n] + gc.lambda * gc.rho[n] <= 0.0) ? 1 : 0;
  }
  return js;
}

double leader_payoff(const AssociationStrategy& x, const JammerStrategy& v,
                     const GameCoefficients& gc) {
  x.validate();
  const int N = gc.num_sensors();
  const int M = gc.num_gateways();
  if (static_cast<int>(v.v.size()) != N) {
    throw std::invalid_argument("leader_payoff: v size != sensor count");
  }
  double total = 0.0;
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      if (x.x.at(n, m)) total += gc.a.at(n, m) * v.v[n] + gc.b.at(n, m);
    }
  }
  return total;
}

double jammer_objective(const JammerStrategy& v, const AssociationStrategy& x,
                        const GameCoefficients& gc) {
  const std::vector<double> w = jammer_weight(x, gc);
  const int N = gc.num_sensors();
  if (static_cast<int>(v.v.size()) != N) {
    throw std::invalid_argument("jammer_objective: v size != sensor count");
  }
  double total = 0.0;
  for (int n = 0; n < N; ++n) {
    if (v.v[n]) total += w[n] + gc.lambda * gc.rho[n];
  }
  return total;
}

}  // namespace jamnet::game
