// model.hpp -- network geometry, channel success probabilities, scenario i/o.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jamnet/core.hpp"

namespace jamnet::model {

// Exponential path-attenuation channel. Each probability is a reference value
// raised to (distance / reference distance)^alpha.
struct ChannelParams {
  double alpha = 4.0;
  double p0_clear = 0.7;   // link success at distance d0, no interference
  double d0 = 0.5;
  double p0_jam = 0.1;     // link success at distance ratio r0 under jamming
  double r0 = 1.0;
  double p0_detect = 0.5;  // jammer detection probability at distance D0
  double D0 = 0.5;
};

struct Scenario {
  std::vector<Point2> sn_pos;      // sensors, size N
  std::vector<Point2> gn_pos;      // gateways, size M
  Point2 jam_pos;
  ChannelParams channel;
  std::vector<double> gn_cost;     // size M
  std::vector<int> gn_capacity;    // size M
  double budget = 2.0;             // activation budget
  double jam_power = 1.0;          // scales the jammer's per-victim cost
  double lambda = 0.75;            // jammer power-saving weight

  int num_sensors() const { return static_cast<int>(sn_pos.size()); }
  int num_gateways() const { return static_cast<int>(gn_pos.size()); }

  // Throws std::invalid_argument on structural problems: empty node sets,
  // non-finite values, size mismatches, out-of-range channel constants.
  void validate() const;
};

struct LinkProbabilities {
  Matrix p_clear;              // N x M, success without jamming
  Matrix p_jam;                // N x M, success under jamming (clamped <= p_clear)
  std::vector<double> p_detect;  // N, probability sensor n is detected
  std::vector<double> p_ack;     // M, probability the jammer hears gateway m's ack

  bool operator==(const LinkProbabilities& o) const {
    return p_clear == o.p_clear && p_jam == o.p_jam && p_detect == o.p_detect && p_ack == o.p_ack;
  }
};

struct LinkOptions {
  bool clamp_jam = true;  // enforce p_jam <= p_clear entrywise
  bool unit_ack = false;  // pretend the jammer hears every ack (p_ack = 1)
};

// Scalar channel laws. d, r, D are distances (r is already a ratio).
// Negative or NaN input throws std::invalid_argument; r = +inf returns 0.
double unjammed_success(double d, const ChannelParams& cp);
double jammed_success(double r, const ChannelParams& cp);
double detection_prob(double D, const ChannelParams& cp);

// Evaluates every link quantity for a scenario. Pure: same scenario, same
// options -> bit-identical tables. A sensor sitting on the jammer is treated
// as fully jammed (p_jam = 0) since its distance ratio degenerates.
LinkProbabilities compute_link_probabilities(const Scenario& s, const LinkOptions& opt = {});

// Named gateway layouts for generated scenarios.
//   single-center  M=1 at (0.5,0.5), capacity 20
//   two-gn         (0.25,0.5) (0.75,0.5), capacity 10 each
//   three-gn       (0.25,0.25) (0.25,0.75) (0.75,0.5), capacity 10 each
//   four-gn        (0.25,0.25) (0.75,0.25) (0.25,0.75) (0.75,0.75), capacity 10 each
struct GenerationConfig {
  std::string layout = "two-gn";
  int num_sensors = 20;
  std::vector<Point2> explicit_gn;       // used when layout == "explicit"
  std::vector<int> explicit_capacity;    // optional with explicit_gn
  double gn_cost = 1.0;
  double budget = 2.0;
  double jam_power = 1.0;
  double lambda = 0.75;
  ChannelParams channel;
};

std::vector<Point2> layout_positions(const std::string& layout);
std::vector<int> layout_capacities(const std::string& layout);

// Sensors then jammer are drawn iid uniform on the unit square from a stream
// derived from `seed` alone. Draw order is pinned: sn[0].x, sn[0].y, ...,
// sn[N-1].y, jam.x, jam.y.
Scenario generate_scenario(const GenerationConfig& cfg, std::uint64_t seed);

// JSON round-trip. Doubles survive exactly (shortest round-trip formatting).
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace jamnet::model
