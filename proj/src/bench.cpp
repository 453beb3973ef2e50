// bench.cpp
#include "jamnet/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "jamnet/rng.hpp"
#include "jamnet/stackelberg.hpp"

namespace jamnet::bench {

namespace {

constexpr double kTol = 1e-9;
const double kNan = std::numeric_limits<double>::quiet_NaN();

// Seed-path tags, one per experiment family. Scaling deliberately shares the
// sweep tag: it is the same grid read through a different summary, so the two
// commands agree row-for-row at equal settings.
constexpr std::uint64_t kTagSweep = 1;
constexpr std::uint64_t kTagGateways = 3;
constexpr std::uint64_t kTagFictitious = 4;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs work(0..count-1) on up to `jobs` threads; slot-indexed outputs keep
// the merge order independent of scheduling.
template <typename Fn>
void for_each_index(int count, int jobs, Fn&& work) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(jobs, count);
  std::vector<std::future<void>> futures;
  futures.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    }));
  }
  for (auto& f : futures) f.get();
}

model::Scenario make_scenario(const ExperimentSpec& spec, const std::string& layout, int N,
                              std::uint64_t seed) {
  model::GenerationConfig cfg;
  cfg.layout = layout;
  cfg.num_sensors = N;
  cfg.budget = spec.budget;
  cfg.jam_power = spec.jam_power;
  cfg.lambda = spec.lambda_grid.front();
  cfg.channel = spec.channel;
  return model::generate_scenario(cfg, seed);
}

// All rows for one generated scenario across the lambda grid.
std::vector<ResultRow> grid_rows(const ExperimentSpec& spec, const char* name,
                                 const model::Scenario& base_scenario, std::uint64_t seed,
                                 int trial) {
  model::Scenario s = base_scenario;
  const int N = s.num_sensors();
  const int M = s.num_gateways();

  // Jam-free optimum: the association program against a silent jammer. Its
  // objective has no lambda term, so one solve covers the whole grid.
  const model::LinkProbabilities lp = model::compute_link_probabilities(s);
  const game::GameCoefficients gc = game::coefficients(lp, spec.mode, s.lambda, s.jam_power);
  game::JammerStrategy silent;
  silent.v.assign(static_cast<size_t>(N), 0);
  const bilp::BilpSolution base = bilp::solve(stackelberg::build_p1(gc, silent, s), spec.solver);
  const bool base_ok = base.status == bilp::SolveStatus::optimal;
  const double jamfree = base_ok ? base.objective_value : kNan;

  std::vector<ResultRow> rows;
  rows.reserve(spec.lambda_grid.size());
  for (double lam : spec.lambda_grid) {
    s.lambda = lam;
    ResultRow r;
    r.experiment = name;
    r.trial = trial;
    r.seed = seed;
    r.lambda = lam;
    r.M = M;
    r.N = N;
    r.jamfree_payoff = jamfree;
    bool ok = base_ok;
    if (ok) {
      try {
        const stackelberg::Equilibrium eq = stackelberg::solve_equilibrium(s, spec.mode, spec.solver);
        r.leader_payoff = eq.leader_payoff;
        int victims = 0;
        for (std::uint8_t b : eq.v_star.v) victims += b;
        r.n_victims = victims;
        r.solver_nodes = eq.solver_stats.nodes_explored;
        r.wall_ms = spec.timing ? eq.solver_stats.wall_ms : 0.0;
        if (r.leader_payoff > jamfree + kTol) {
          throw std::logic_error("bench: equilibrium payoff exceeds the jam-free optimum");
        }
      } catch (const stackelberg::NodeLimitError&) {
        ok = false;
      }
    }
    if (!ok) {
      r.failed = true;
      r.leader_payoff = kNan;
      r.jamfree_payoff = kNan;
      r.n_victims = -1;
      r.solver_nodes = spec.solver.node_limit;
      r.wall_ms = 0.0;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> run_grid(const ExperimentSpec& spec, const char* name, std::uint64_t tag) {
  spec.validate();
  const int counts = static_cast<int>(spec.sensor_counts.size());
  const int items = counts * spec.trials;
  std::vector<std::vector<ResultRow>> slots(static_cast<size_t>(items));
  for_each_index(items, spec.jobs, [&](int i) {
    const int N = spec.sensor_counts[static_cast<size_t>(i / spec.trials)];
    const int trial = i % spec.trials;
    const std::uint64_t seed = derive_seed(
        spec.master_seed, {tag, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(trial)});
    slots[static_cast<size_t>(i)] =
        grid_rows(spec, name, make_scenario(spec, "two-gn", N, seed), seed, trial);
  });
  std::vector<ResultRow> rows;
  rows.reserve(static_cast<size_t>(items) * spec.lambda_grid.size());
  for (auto& slot : slots)
    for (auto& r : slot) rows.push_back(std::move(r));
  return rows;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::sweep: return "sweep";
    case Experiment::scaling: return "scaling";
    case Experiment::gateways: return "gateways";
    case Experiment::fictitious: return "fictitious";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
  if (jobs < 1) throw std::invalid_argument("spec: jobs must be >= 1");
  if (lambda_grid.empty()) throw std::invalid_argument("spec: empty lambda grid");
  for (double v : lambda_grid) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("spec: lambda grid values must be finite and >= 0");
    }
  }
  if (sensor_counts.empty()) throw std::invalid_argument("spec: empty sensor count list");
  for (int n : sensor_counts) {
    if (n < 1) throw std::invalid_argument("spec: sensor counts must be >= 1");
  }
  if (layouts.empty()) throw std::invalid_argument("spec: empty layout list");
  for (const std::string& l : layouts) (void)model::layout_positions(l);
}

ExperimentSpec quick_profile(ExperimentSpec base) {
  base.trials = 25;
  base.sensor_counts = {10, 20, 30};
  return base;
}

std::vector<double> lambda_grid_default() { return parse_lambda_grid("0:1:21"); }

std::vector<double> parse_lambda_grid(const std::string& text) {
  const size_t c1 = text.find(':');
  const size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw std::invalid_argument("lambda grid: expected a:b:n");
  }
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    size_t used = 0;
    const std::string sa = text.substr(0, c1), sb = text.substr(c1 + 1, c2 - c1 - 1),
                      sn = text.substr(c2 + 1);
    a = std::stod(sa, &used);
    if (used != sa.size()) throw std::invalid_argument("junk");
    b = std::stod(sb, &used);
    if (used != sb.size()) throw std::invalid_argument("junk");
    n = std::stol(sn, &used);
    if (used != sn.size()) throw std::invalid_argument("junk");
  } catch (const std::exception&) {
    throw std::invalid_argument("lambda grid: expected a:b:n with numeric fields");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < a || n < 1) {
    throw std::invalid_argument("lambda grid: need 0 <= a <= b and n >= 1");
  }
  std::vector<double> grid(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    if (i == 0) grid[static_cast<size_t>(i)] = a;
    else if (i == n - 1) grid[static_cast<size_t>(i)] = b;
    else grid[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  return run_grid(spec, "sweep", kTagSweep);
}

std::vector<ResultRow> run_sensor_scaling(const ExperimentSpec& spec) {
  return run_grid(spec, "scaling", kTagSweep);
}

std::vector<ResultRow> run_gateway_comparison(const ExperimentSpec& spec) {
  spec.validate();
  const int N = spec.sensor_counts.front();
  const int nlayouts = static_cast<int>(spec.layouts.size());
  const int items = nlayouts * spec.trials;
  std::vector<std::vector<ResultRow>> slots(static_cast<size_t>(items));
  for_each_index(items, spec.jobs, [&](int i) {
    const std::string& layout = spec.layouts[static_cast<size_t>(i / spec.trials)];
    const int trial = i % spec.trials;
    // The layout is kept out of the seed path so every layout sees the same
    // sensor and jammer draws: the comparison is paired trial-for-trial.
    const std::uint64_t seed =
        derive_seed(spec.master_seed, {kTagGateways, static_cast<std::uint64_t>(N),
                                       static_cast<std::uint64_t>(trial)});
    slots[static_cast<size_t>(i)] =
        grid_rows(spec, "gateways", make_scenario(spec, layout, N, seed), seed, trial);
  });
  std::vector<ResultRow> rows;
  rows.reserve(static_cast<size_t>(items) * spec.lambda_grid.size());
  for (auto& slot : slots)
    for (auto& r : slot) rows.push_back(std::move(r));
  return rows;
}

std::vector<dynamics::PlayTrace> run_fictitious(const ExperimentSpec& spec, int rounds) {
  spec.validate();
  if (rounds < 1) throw std::invalid_argument("run_fictitious: rounds must be >= 1");
  const int N = spec.sensor_counts.front();
  std::vector<dynamics::PlayTrace> traces(static_cast<size_t>(spec.trials));
  for_each_index(spec.trials, spec.jobs, [&](int trial) {
    const std::uint64_t seed =
        derive_seed(spec.master_seed, {kTagFictitious, static_cast<std::uint64_t>(N),
                                       static_cast<std::uint64_t>(trial)});
    const model::Scenario s = make_scenario(spec, "two-gn", N, seed);
    traces[static_cast<size_t>(trial)] =
        dynamics::fictitious_play(s, spec.mode, rounds, std::nullopt, spec.solver);
  });
  return traces;
}

std::vector<MeanPoint> mean_by_group(const std::vector<ResultRow>& rows) {
  struct Accum {
    std::string experiment;
    double payoff = 0.0, jamfree = 0.0;
    int ok = 0;
  };
  std::map<std::tuple<int, int, double>, Accum> groups;
  for (const ResultRow& r : rows) {
    Accum& acc = groups[{r.N, r.M, r.lambda}];
    if (acc.experiment.empty()) acc.experiment = r.experiment;
    if (r.failed) continue;
    acc.payoff += r.leader_payoff;
    acc.jamfree += r.jamfree_payoff;
    acc.ok += 1;
  }
  std::vector<MeanPoint> out;
  out.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    MeanPoint p;
    p.experiment = acc.experiment;
    p.N = std::get<0>(key);
    p.M = std::get<1>(key);
    p.lambda = std::get<2>(key);
    p.trials_ok = acc.ok;
    p.mean_payoff = acc.ok > 0 ? acc.payoff / acc.ok : kNan;
    p.mean_jamfree = acc.ok > 0 ? acc.jamfree / acc.ok : kNan;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ScalingEntry> scaling_drops(const std::vector<ResultRow>& rows) {
  std::map<int, std::pair<double, double>> extremes;  // N -> (min, max) of means
  for (const MeanPoint& p : mean_by_group(rows)) {
    if (p.trials_ok == 0) continue;
    auto it = extremes.find(p.N);
    if (it == extremes.end()) {
      extremes[p.N] = {p.mean_payoff, p.mean_payoff};
    } else {
      it->second.first = std::min(it->second.first, p.mean_payoff);
      it->second.second = std::max(it->second.second, p.mean_payoff);
    }
  }
  std::vector<ScalingEntry> out;
  out.reserve(extremes.size());
  for (const auto& [N, mm] : extremes) {
    ScalingEntry e;
    e.N = N;
    e.drop = mm.second > 0.0 ? (mm.second - mm.first) / mm.second : 0.0;
    out.push_back(e);
  }
  return out;
}

GatewaySummary gateway_gains(const std::vector<ResultRow>& rows) {
  const std::vector<MeanPoint> means = mean_by_group(rows);
  GatewaySummary summary;
  std::set<double> grid;
  for (const MeanPoint& p : means) grid.insert(p.lambda);
  summary.lambda_grid.assign(grid.begin(), grid.end());
  const size_t L = summary.lambda_grid.size();

  std::map<int, std::vector<double>> per_m;
  for (const MeanPoint& p : means) {
    auto& v = per_m[p.M];
    if (v.empty()) v.assign(L, kNan);
    const auto it = std::lower_bound(summary.lambda_grid.begin(), summary.lambda_grid.end(), p.lambda);
    v[static_cast<size_t>(it - summary.lambda_grid.begin())] =
        p.trials_ok > 0 ? p.mean_payoff : kNan;
  }
  const auto base_it = per_m.find(1);
  if (base_it == per_m.end()) {
    throw std::invalid_argument("gateway_gains: no single-gateway baseline rows (M=1)");
  }
  const std::vector<double>& base = base_it->second;

  for (const auto& [M, vals] : per_m) {
    GatewayEntry e;
    e.M = M;
    e.mean_per_lambda = vals;
    double best = 0.0;
    for (size_t i = 0; i < L; ++i) {
      if (std::isnan(vals[i]) || std::isnan(base[i]) || base[i] <= 0.0) continue;
      best = std::max(best, (vals[i] - base[i]) / base[i]);
    }
    e.max_gain = M == 1 ? 0.0 : best;
    summary.entries.push_back(std::move(e));
  }
  return summary;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "experiment,trial,seed,lambda,M,N,leader_payoff,jamfree_payoff,n_victims,solver_nodes,"
      "wall_ms\n";
  for (const ResultRow& r : rows) {
    out += r.experiment;
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += fmt_g(r.lambda);
    out += ',';
    out += std::to_string(r.M);
    out += ',';
    out += std::to_string(r.N);
    out += ',';
    out += fmt_g(r.leader_payoff);
    out += ',';
    out += fmt_g(r.jamfree_payoff);
    out += ',';
    out += std::to_string(r.n_victims);
    out += ',';
    out += std::to_string(r.solver_nodes);
    out += ',';
    out += fmt_g(r.wall_ms);
    out += '\n';
  }
  return out;
}

std::string means_to_csv(const std::vector<MeanPoint>& points) {
  std::string out = "experiment,N,M,lambda,mean_leader_payoff,mean_jamfree_payoff,trials_ok\n";
  for (const MeanPoint& p : points) {
    out += p.experiment;
    out += ',';
    out += std::to_string(p.N);
    out += ',';
    out += std::to_string(p.M);
    out += ',';
    out += fmt_g(p.lambda);
    out += ',';
    out += fmt_g(p.mean_payoff);
    out += ',';
    out += fmt_g(p.mean_jamfree);
    out += ',';
    out += std::to_string(p.trials_ok);
    out += '\n';
  }
  return out;
}

std::string drops_to_csv(const std::vector<ScalingEntry>& entries) {
  std::string out = "N,relative_drop\n";
  for (const ScalingEntry& e : entries) {
    out += std::to_string(e.N);
    out += ',';
    out += fmt_g(e.drop);
    out += '\n';
  }
  return out;
}

std::string gains_to_csv(const GatewaySummary& summary) {
  std::string out = "M,max_gain\n";
  for (const GatewayEntry& e : summary.entries) {
    out += std::to_string(e.M);
    out += ',';
    out += fmt_g(e.max_gain);
    out += '\n';
  }
  return out;
}

bool any_failed(const std::vector<ResultRow>& rows) {
  for (const ResultRow& r : rows)
    if (r.failed) return true;
  return false;
}

}  // namespace jamnet::bench
