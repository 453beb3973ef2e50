// model.cpp -- channel laws, link tables, scenario generation and JSON i/o.
#include "jamnet/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jamnet/rng.hpp"

namespace jamnet::model {

using nlohmann::json;

namespace {

// p0^((d/ref)^alpha) with the shared input policy: d must be finite and
// nonnegative, except callers that legitimately produce +inf handle it first.
double attenuated(double p0, double d, double ref, double alpha, const char* what) {
  if (std::isnan(d) || d < 0.0) {
    throw std::invalid_argument(std::string(what) + ": distance must be >= 0");
  }
  return std::pow(p0, std::pow(d / ref, alpha));
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("scenario: " + msg);
}

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

double unjammed_success(double d, const ChannelParams& cp) {
  if (!std::isfinite(d)) {
    throw std::invalid_argument("unjammed_success: distance must be finite");
  }
  return attenuated(cp.p0_clear, d, cp.d0, cp.alpha, "unjammed_success");
}

double jammed_success(double r, const ChannelParams& cp) {
  // r is the gateway-distance / jammer-distance ratio; a sensor on top of the
  // jammer drives it to +inf, which means the link is dead.
  if (std::isinf(r)) return 0.0;
  return attenuated(cp.p0_jam, r, cp.r0, cp.alpha, "jammed_success");
}

double detection_prob(double D, const ChannelParams& cp) {
  if (!std::isfinite(D)) {
    throw std::invalid_argument("detection_prob: distance must be finite");
  }
  return attenuated(cp.p0_detect, D, cp.D0, cp.alpha, "detection_prob");
}

void Scenario::validate() const {
  require(!sn_pos.empty(), "needs at least one sensor");
  require(!gn_pos.empty(), "needs at least one gateway");
  for (const auto& p : sn_pos) require(finite(p), "sensor position not finite");
  for (const auto& p : gn_pos) require(finite(p), "gateway position not finite");
  require(finite(jam_pos), "jammer position not finite");
  require(gn_cost.size() == gn_pos.size(), "gn_cost size != gateway count");
  require(gn_capacity.size() == gn_pos.size(), "gn_capacity size != gateway count");
  for (double c : gn_cost) require(std::isfinite(c) && c >= 0.0, "gateway cost must be >= 0");
  for (int k : gn_capacity) require(k >= 0, "gateway capacity must be >= 0");
  require(std::isfinite(budget) && budget >= 0.0, "budget must be >= 0");
  require(std::isfinite(jam_power) && jam_power >= 0.0, "jam_power must be >= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");

  const ChannelParams& c = channel;
  require(std::isfinite(c.alpha) && c.alpha > 0.0, "alpha must be > 0");
  require(c.d0 > 0.0 && c.r0 > 0.0 && c.D0 > 0.0, "reference distances must be > 0");
  auto prob = [](double p) { return std::isfinite(p) && p > 0.0 && p <= 1.0; };
  require(prob(c.p0_clear) && prob(c.p0_jam) && prob(c.p0_detect),
          "reference probabilities must lie in (0,1]");
}

LinkProbabilities compute_link_probabilities(const Scenario& s, const LinkOptions& opt) {
  s.validate();
  const int N = s.num_sensors();
  const int M = s.num_gateways();

  LinkProbabilities lp;
  lp.p_clear = Matrix(N, M);
  lp.p_jam = Matrix(N, M);
  lp.p_detect.resize(N);
  lp.p_ack.resize(M);

  for (int n = 0; n < N; ++n) {
    const double dist_jam = distance(s.sn_pos[n], s.jam_pos);
    lp.p_detect[n] = detection_prob(dist_jam, s.channel);
    for (int m = 0; m < M; ++m) {
      const double d = distance(s.sn_pos[n], s.gn_pos[m]);
      const double clear = unjammed_success(d, s.channel);
      // dist_jam == 0 degenerates the ratio (0/0 or d/0); the sensor sits on
      // the jammer and cannot get a packet out while jammed.
      const double jam =
          dist_jam == 0.0 ? 0.0 : jammed_success(d / dist_jam, s.channel);
      lp.p_clear.at(n, m) = clear;
      lp.p_jam.at(n, m) = opt.clamp_jam ? std::min(jam, clear) : jam;
    }
  }
  for (int m = 0; m < M; ++m) {
    lp.p_ack[m] =
        opt.unit_ack ? 1.0 : detection_prob(distance(s.gn_pos[m], s.jam_pos), s.channel);
  }
  return lp;
}

std::vector<Point2> layout_positions(const std::string& layout) {
  if (layout == "single-center") return {{0.5, 0.5}};
  if (layout == "two-gn") return {{0.25, 0.5}, {0.75, 0.5}};
  if (layout == "three-gn") return {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.5}};
  if (layout == "four-gn") return {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  throw std::invalid_argument("unknown layout: " + layout);
}

std::vector<int> layout_capacities(const std::string& layout) {
  // The lone central gateway gets double capacity so layouts offer the same
  // total service; multi-gateway layouts use 10 per gateway.
  if (layout == "single-center") return {20};
  return std::vector<int>(layout_positions(layout).size(), 10);
}

Scenario generate_scenario(const GenerationConfig& cfg, std::uint64_t seed) {
  if (cfg.num_sensors < 1) throw std::invalid_argument("generate_scenario: num_sensors < 1");

  Scenario s;
  if (cfg.layout == "explicit") {
    if (cfg.explicit_gn.empty()) {
      throw std::invalid_argument("generate_scenario: explicit layout needs gateway positions");
    }
    s.gn_pos = cfg.explicit_gn;
    s.gn_capacity = cfg.explicit_capacity.empty()
                        ? std::vector<int>(s.gn_pos.size(), 10)
                        : cfg.explicit_capacity;
    if (s.gn_capacity.size() != s.gn_pos.size()) {
      throw std::invalid_argument("generate_scenario: capacity list size mismatch");
    }
  } else {
    s.gn_pos = layout_positions(cfg.layout);
    s.gn_capacity = layout_capacities(cfg.layout);
  }
  s.gn_cost.assign(s.gn_pos.size(), cfg.gn_cost);
  s.budget = cfg.budget;
  s.jam_power = cfg.jam_power;
  s.lambda = cfg.lambda;
  s.channel = cfg.channel;

  Rng rng(seed);
  s.sn_pos.resize(cfg.num_sensors);
  for (auto& p : s.sn_pos) {
    p.x = rng.next_unit();
    p.y = rng.next_unit();
  }
  s.jam_pos.x = rng.next_unit();
  s.jam_pos.y = rng.next_unit();

  s.validate();
  return s;
}

namespace {

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("scenario: bad point");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["sn_pos"] = json::array();
  for (const auto& p : s.sn_pos) j["sn_pos"].push_back(point_to_json(p));
  j["gn_pos"] = json::array();
  for (const auto& p : s.gn_pos) j["gn_pos"].push_back(point_to_json(p));
  j["jam_pos"] = point_to_json(s.jam_pos);
  j["channel"] = {{"alpha", s.channel.alpha},   {"p0_clear", s.channel.p0_clear},
                  {"d0", s.channel.d0},         {"p0_jam", s.channel.p0_jam},
                  {"r0", s.channel.r0},         {"p0_detect", s.channel.p0_detect},
                  {"D0", s.channel.D0}};
  j["gn_cost"] = s.gn_cost;
  j["gn_capacity"] = s.gn_capacity;
  j["budget"] = s.budget;
  j["jam_power"] = s.jam_power;
  j["lambda"] = s.lambda;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") + e.what());
  }
  try {
    Scenario s;
    for (const auto& p : j.at("sn_pos")) s.sn_pos.push_back(point_from_json(p));
    for (const auto& p : j.at("gn_pos")) s.gn_pos.push_back(point_from_json(p));
    s.jam_pos = point_from_json(j.at("jam_pos"));
    const json& c = j.at("channel");
    s.channel.alpha = c.at("alpha").get<double>();
    s.channel.p0_clear = c.at("p0_clear").get<double>();
    s.channel.d0 = c.at("d0").get<double>();
    s.channel.p0_jam = c.at("p0_jam").get<double>();
    s.channel.r0 = c.at("r0").get<double>();
    s.channel.p0_detect = c.at("p0_detect").get<double>();
    s.channel.D0 = c.at("D0").get<double>();
    s.gn_cost = j.at("gn_cost").get<std::vector<double>>();
    s.gn_capacity = j.at("gn_capacity").get<std::vector<int>>();
    s.budget = j.at("budget").get<double>();
    s.jam_power = j.at("jam_power").get<double>();
    s.lambda = j.at("lambda").get<double>();
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: missing or mistyped field: ") + e.what());
  }
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << scenario_to_json(s);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

}  // namespace jamnet::model
