// jamnet_cli.cpp -- command-line front end: scenario generation, exact
// equilibrium solves, experiment sweeps, alternating play, SVG plots.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jamnet/bench.hpp"
#include "jamnet/bilp.hpp"
#include "jamnet/dynamics.hpp"
#include "jamnet/game.hpp"
#include "jamnet/model.hpp"
#include "jamnet/stackelberg.hpp"
#include "jamnet/svg_plot.hpp"

namespace {

using namespace jamnet;

struct CommonOpts {
  std::uint64_t seed = 0;
  int trials = -1;  // <= 0 -> keep the profile default
  std::string lambda_grid;
  std::string mode = "learned";
  std::string profile = "full";
  std::string out;
  int jobs = 1;
  bool timing = false;
};

void add_common(CLI::App* sub, CommonOpts& o, bool out_required) {
  sub->add_option("--seed", o.seed, "master seed (default 0)");
  sub->add_option("--trials", o.trials, "trials per cell, overrides the profile default");
  sub->add_option("--lambda-grid", o.lambda_grid, "a:b:n inclusive lambda grid");
  sub->add_option("--mode", o.mode, "jammer knowledge mode")
      ->check(CLI::IsMember({"naive", "learned"}));
  sub->add_option("--profile", o.profile, "full: 100 trials, N in {20,40,60}; quick: 25, {10,20,30}")
      ->check(CLI::IsMember({"full", "quick"}));
  auto* out = sub->add_option("--out", o.out, "output file path");
  if (out_required) out->required();
  sub->add_option("--jobs", o.jobs, "parallel trial workers (default 1)");
  sub->add_flag("--timing", o.timing,
                "fill the wall_ms column (off by default so reruns are byte-identical)");
}

bench::ExperimentSpec spec_from(const CommonOpts& o) {
  bench::ExperimentSpec spec;
  if (o.profile == "quick") spec = bench::quick_profile(spec);
  if (o.trials > 0) spec.trials = o.trials;
  spec.lambda_grid =
      o.lambda_grid.empty() ? bench::lambda_grid_default() : bench::parse_lambda_grid(o.lambda_grid);
  spec.master_seed = o.seed;
  spec.mode = game::mode_from_string(o.mode);
  spec.jobs = o.jobs;
  spec.timing = o.timing;
  return spec;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string with_suffix(const std::string& out, const std::string& tag) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + tag + ext;
  }
  return out + tag + ext;
}

std::string pct(double frac) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * frac);
  return buf;
}

model::Scenario scenario_from_opts(const std::string& scenario_path, std::uint64_t seed,
                                   const std::string& layout, int sensors, double lambda) {
  if (!scenario_path.empty()) {
    model::Scenario s = model::load_scenario(scenario_path);
    s.validate();
    return s;
  }
  model::GenerationConfig cfg;
  cfg.layout = layout;
  cfg.num_sensors = sensors;
  cfg.lambda = lambda;
  return model::generate_scenario(cfg, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stackelberg association game toolkit: exact equilibria for a "
               "multi-gateway sensor network facing a reactive jammer"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a random scenario and save it as JSON");
  CommonOpts gen_o;
  std::string gen_layout = "two-gn";
  int gen_sensors = 20;
  double gen_lambda = 0.75;
  add_common(gen, gen_o, /*out_required=*/true);
  gen->add_option("--layout", gen_layout, "single-center | two-gn | three-gn | four-gn");
  gen->add_option("--sensors", gen_sensors, "number of sensors");
  gen->add_option("--lambda", gen_lambda, "jammer power-saving weight");
  gen->callback([&] {
    model::GenerationConfig cfg;
    cfg.layout = gen_layout;
    cfg.num_sensors = gen_sensors;
    cfg.lambda = gen_lambda;
    const model::Scenario s = model::generate_scenario(cfg, gen_o.seed);
    model::save_scenario(s, gen_o.out);
    std::cout << "wrote " << gen_o.out << " (N=" << s.num_sensors() << " M=" << s.num_gateways()
              << " lambda=" << s.lambda << ")\n";
  });

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "solve one scenario to the exact equilibrium");
  CommonOpts solve_o;
  std::string solve_scenario, solve_dump_lp, solve_layout = "two-gn";
  int solve_sensors = 20;
  double solve_lambda = 0.75;
  add_common(solve, solve_o, /*out_required=*/false);
  solve->add_option("--scenario", solve_scenario, "scenario JSON (generated when omitted)");
  solve->add_option("--layout", solve_layout, "layout for a generated scenario");
  solve->add_option("--sensors", solve_sensors, "sensors for a generated scenario");
  solve->add_option("--lambda", solve_lambda, "lambda for a generated scenario");
  solve->add_option("--dump-lp", solve_dump_lp, "also write the equilibrium program in LP format");
  solve->callback([&] {
    const model::Scenario s =
        scenario_from_opts(solve_scenario, solve_o.seed, solve_layout, solve_sensors, solve_lambda);
    const game::KnowledgeMode mode = game::mode_from_string(solve_o.mode);
    const model::LinkProbabilities lp = model::compute_link_probabilities(s);
    const game::GameCoefficients gc = game::coefficients(lp, mode, s.lambda, s.jam_power);
    if (!solve_dump_lp.empty()) {
      write_file(solve_dump_lp, bilp::to_lp_string(stackelberg::build_ilp_se(gc, s)));
    }
    stackelberg::Equilibrium eq = stackelberg::solve_equilibrium(s, mode);
    if (!solve_o.timing) eq.solver_stats.wall_ms = 0.0;
    const stackelberg::VerificationReport rep = stackelberg::verify_equilibrium(eq, gc, s);
    const std::string json = stackelberg::equilibrium_to_json(eq, rep);
    if (solve_o.out.empty()) {
      std::cout << json;
    } else {
      write_file(solve_o.out, json);
    }
    int victims = 0;
    for (std::uint8_t b : eq.v_star.v) victims += b;
    std::cout << "payoff=" << eq.leader_payoff << " victims=" << victims
              << " nodes=" << eq.solver_stats.nodes_explored
              << " verification=" << (rep.all_passed() ? "ok" : "FAILED") << "\n";
    if (!rep.all_passed()) throw std::runtime_error("equilibrium verification failed");
  });

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "lambda sweep over sensor counts (two gateways)");
  CommonOpts sweep_o;
  std::vector<int> sweep_sensors;
  add_common(sweep, sweep_o, /*out_required=*/true);
  sweep->add_option("--sensors", sweep_sensors, "sensor counts under test");
  sweep->callback([&] {
    bench::ExperimentSpec spec = spec_from(sweep_o);
    if (!sweep_sensors.empty()) spec.sensor_counts = sweep_sensors;
    const std::vector<bench::ResultRow> rows = bench::run_sweep(spec);
    write_file(sweep_o.out, bench::rows_to_csv(rows));
    const std::string summary = with_suffix(sweep_o.out, ".summary");
    write_file(summary, bench::means_to_csv(bench::mean_by_group(rows)));
    std::cout << rows.size() << " rows -> " << sweep_o.out << "\nsummary -> " << summary << "\n";
    if (bench::any_failed(rows)) exit_code = 3;
  });

  // --- scaling ---
  auto* scaling =
      app.add_subcommand("scaling", "relative payoff drop across the lambda grid per sensor count");
  CommonOpts scaling_o;
  std::vector<int> scaling_sensors;
  add_common(scaling, scaling_o, /*out_required=*/true);
  scaling->add_option("--sensors", scaling_sensors, "sensor counts under test");
  scaling->callback([&] {
    bench::ExperimentSpec spec = spec_from(scaling_o);
    if (!scaling_sensors.empty()) spec.sensor_counts = scaling_sensors;
    const std::vector<bench::ResultRow> rows = bench::run_sensor_scaling(spec);
    write_file(scaling_o.out, bench::rows_to_csv(rows));
    const std::string summary = with_suffix(scaling_o.out, ".summary");
    write_file(summary, bench::means_to_csv(bench::mean_by_group(rows)));
    const std::vector<bench::ScalingEntry> drops = bench::scaling_drops(rows);
    const std::string drops_path = with_suffix(scaling_o.out, ".drops");
    write_file(drops_path, bench::drops_to_csv(drops));
    std::cout << rows.size() << " rows -> " << scaling_o.out << "\nsummary -> " << summary
              << "\ndrops -> " << drops_path << "\n";
    for (const bench::ScalingEntry& e : drops) {
      std::cout << "N=" << e.N << " drop=" << pct(e.drop) << "\n";
    }
    if (bench::any_failed(rows)) exit_code = 3;
  });

  // --- gateways ---
  auto* gateways =
      app.add_subcommand("gateways", "gateway layout comparison against the single-center baseline");
  CommonOpts gateways_o;
  std::vector<std::string> gw_layouts;
  int gw_sensors = 20;
  add_common(gateways, gateways_o, /*out_required=*/true);
  gateways->add_option("--layouts", gw_layouts, "layouts under test (must include single-center)");
  gateways->add_option("--sensors", gw_sensors, "sensor count shared by all layouts");
  gateways->callback([&] {
    bench::ExperimentSpec spec = spec_from(gateways_o);
    if (!gw_layouts.empty()) spec.layouts = gw_layouts;
    spec.sensor_counts = {gw_sensors};
    const std::vector<bench::ResultRow> rows = bench::run_gateway_comparison(spec);
    write_file(gateways_o.out, bench::rows_to_csv(rows));
    const std::string summary = with_suffix(gateways_o.out, ".summary");
    write_file(summary, bench::means_to_csv(bench::mean_by_group(rows)));
    const bench::GatewaySummary gains = bench::gateway_gains(rows);
    const std::string gains_path = with_suffix(gateways_o.out, ".gains");
    write_file(gains_path, bench::gains_to_csv(gains));
    std::cout << rows.size() << " rows -> " << gateways_o.out << "\nsummary -> " << summary
              << "\ngains -> " << gains_path << "\n";
    for (const bench::GatewayEntry& e : gains.entries) {
      if (e.M == 1) continue;
      std::cout << "M=" << e.M << " max-gain=" << pct(e.max_gain) << "\n";
    }
    if (bench::any_failed(rows)) exit_code = 3;
  });

  // --- fictitious ---
  auto* fict = app.add_subcommand("fictitious", "alternating best-response play, one trace");
  CommonOpts fict_o;
  std::string fict_scenario, fict_init;
  int fict_rounds = 20, fict_sensors = 20;
  double fict_lambda = 0.75;
  add_common(fict, fict_o, /*out_required=*/false);
  fict->add_option("--scenario", fict_scenario, "scenario JSON (generated when omitted)");
  fict->add_option("--rounds", fict_rounds, "maximum rounds (default 20)");
  fict->add_option("--sensors", fict_sensors, "sensors for a generated scenario");
  fict->add_option("--lambda", fict_lambda, "lambda for a generated scenario");
  fict->add_option("--init", fict_init, "initial victim set, comma-separated 0/1 flags");
  fict->callback([&] {
    const model::Scenario s =
        scenario_from_opts(fict_scenario, fict_o.seed, "two-gn", fict_sensors, fict_lambda);
    std::optional<BitVector> init;
    if (!fict_init.empty()) {
      BitVector v;
      for (size_t i = 0; i < fict_init.size(); ++i) {
        const char c = fict_init[i];
        if (c == ',') continue;
        if (c != '0' && c != '1') throw std::invalid_argument("--init: flags must be 0 or 1");
        v.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      init = std::move(v);
    }
    const game::KnowledgeMode mode = game::mode_from_string(fict_o.mode);
    const dynamics::PlayTrace trace = dynamics::fictitious_play(s, mode, fict_rounds, init);
    const std::string csv = dynamics::trace_to_csv(trace);
    if (fict_o.out.empty()) {
      std::cout << csv;
    } else {
      write_file(fict_o.out, csv);
      std::cout << trace.rounds_run << " rounds -> " << fict_o.out << "\n";
    }
    std::cout << (trace.converged
                      ? "converged"
                      : trace.cycle_length
                            ? "cycle of length " + std::to_string(*trace.cycle_length)
                            : "no fixed point within the round budget")
              << "\n";
  });

  // --- plot ---
  auto* plot = app.add_subcommand("plot", "render a results CSV as an SVG line chart");
  std::string plot_in, plot_kind, plot_out, plot_title;
  int plot_w = 760, plot_h = 480;
  plot->add_option("--in", plot_in, "input CSV")->required();
  plot->add_option("--kind", plot_kind, "sweep | scaling | gateways | fictitious")->required();
  plot->add_option("--out", plot_out, "output SVG")->required();
  plot->add_option("--title", plot_title, "chart title override");
  plot->add_option("--width", plot_w, "canvas width (px)");
  plot->add_option("--height", plot_h, "canvas height (px)");
  plot->callback([&] {
    svg_plot::PlotSpec ps;
    ps.kind = svg_plot::kind_from_string(plot_kind);
    ps.title = plot_title;
    ps.width = plot_w;
    ps.height = plot_h;
    svg_plot::emit_plot(plot_in, ps, plot_out);
    std::cout << "wrote " << plot_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const stackelberg::NodeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
