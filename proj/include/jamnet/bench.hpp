// bench.hpp -- seeded experiment harness: lambda sweeps, sensor scaling,
// gateway layout comparison, alternating-play traces; CSV emission.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jamnet/bilp.hpp"
#include "jamnet/dynamics.hpp"
#include "jamnet/game.hpp"
#include "jamnet/model.hpp"

namespace jamnet::bench {

enum class Experiment { sweep, scaling, gateways, fictitious };
const char* experiment_name(Experiment e);

struct ExperimentSpec {
  Experiment experiment = Experiment::sweep;
  std::vector<std::string> layouts = {"single-center", "two-gn", "three-gn", "four-gn"};
  std::vector<int> sensor_counts = {20, 40, 60};
  std::vector<double> lambda_grid;  // fill with lambda_grid_default() when empty
  int trials = 100;
  std::uint64_t master_seed = 0;
  game::KnowledgeMode mode = game::KnowledgeMode::learned;
  int jobs = 1;
  bool timing = false;  // wall_ms column stays 0 unless enabled (reproducible files)
  model::ChannelParams channel;
  double budget = 2.0;
  double jam_power = 1.0;
  bilp::SolveOptions solver;

  // Throws std::invalid_argument: trials/jobs < 1, empty or negative lambda
  // grid, empty/invalid sensor counts or layouts.
  void validate() const;
};

// 25 trials and sensor counts {10,20,30}; everything else untouched.
ExperimentSpec quick_profile(ExperimentSpec base = {});

// 21 evenly spaced values on [0,1].
std::vector<double> lambda_grid_default();

// "a:b:n" -> n evenly spaced values from a to b inclusive (n=1 -> {a}).
// Throws std::invalid_argument on malformed text, a < 0, b < a, or n < 1.
std::vector<double> parse_lambda_grid(const std::string& text);

struct ResultRow {
  std::string experiment;
  int trial = 0;
  std::uint64_t seed = 0;  // the per-scenario derived seed
  double lambda = 0.0;
  int M = 0;
  int N = 0;
  double leader_payoff = 0.0;   // NaN when failed
  double jamfree_payoff = 0.0;  // NaN when failed
  int n_victims = 0;            // -1 when failed
  std::uint64_t solver_nodes = 0;
  double wall_ms = 0.0;
  bool failed = false;  // solver node limit hit for this row
};

// Lambda sweep: two-gateway layout, every (N, lambda, trial) cell.
// A per-trial node-limit failure is recorded in its rows and the run
// continues. Rows come back in deterministic (N, trial, lambda) order
// regardless of `jobs`.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

// Same grid as run_sweep but tagged "scaling"; pair with scaling_drops().
std::vector<ResultRow> run_sensor_scaling(const ExperimentSpec& spec);

// One run per layout in spec.layouts at N = sensor_counts.front(); sensor and
// jammer draws are shared across layouts trial-for-trial so the comparison is
// paired. Rows ordered by (layout, trial, lambda).
std::vector<ResultRow> run_gateway_comparison(const ExperimentSpec& spec);

// Alternating best-response traces at lambda = lambda_grid.front() on the
// two-gateway layout, one per trial. Node-limit failures propagate.
std::vector<dynamics::PlayTrace> run_fictitious(const ExperimentSpec& spec, int rounds);

// --- aggregation (pure functions of the row set) ---

struct MeanPoint {
  std::string experiment;
  int N = 0;
  int M = 0;
  double lambda = 0.0;
  double mean_payoff = 0.0;
  double mean_jamfree = 0.0;
  int trials_ok = 0;  // failed rows are excluded from the means
};

// Group means keyed by (N, M, lambda), sorted ascending by that key.
std::vector<MeanPoint> mean_by_group(const std::vector<ResultRow>& rows);

struct ScalingEntry {
  int N = 0;
  double drop = 0.0;  // (max - min) / max of the per-lambda mean payoff
};
std::vector<ScalingEntry> scaling_drops(const std::vector<ResultRow>& rows);

struct GatewayEntry {
  int M = 0;
  std::vector<double> mean_per_lambda;
  double max_gain = 0.0;  // max over lambda of relative gain vs the M=1 layout
};
struct GatewaySummary {
  std::vector<double> lambda_grid;
  std::vector<GatewayEntry> entries;  // sorted by M; includes M=1 with gain 0
};
GatewaySummary gateway_gains(const std::vector<ResultRow>& rows);

// --- CSV ---

// Header exactly:
// experiment,trial,seed,lambda,M,N,leader_payoff,jamfree_payoff,n_victims,solver_nodes,wall_ms
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string means_to_csv(const std::vector<MeanPoint>& points);
std::string drops_to_csv(const std::vector<ScalingEntry>& entries);
std::string gains_to_csv(const GatewaySummary& summary);

bool any_failed(const std::vector<ResultRow>& rows);

}  // namespace jamnet::bench
