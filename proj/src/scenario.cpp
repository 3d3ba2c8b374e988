#include "tfhop/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tfhop/rng.hpp"

namespace tfhop {

using nlohmann::json;

void InterferenceGraph::add_edge(int from, int to, double delay_s) {
  if (from == to) throw ScenarioError("graph.edges: self-edge at radar " + std::to_string(from));
  if (delay_s < 0.0) throw ScenarioError("graph.edges.delay_us: negative delay");
  edges_.push_back({from, to, delay_s});
}

std::vector<int> InterferenceGraph::interferers_of(int victim_id) const {
  std::vector<int> out;
  for (const auto& e : edges_)
    if (e.to == victim_id) out.push_back(e.from);
  return out;
}

std::optional<double> InterferenceGraph::delay(int from, int to) const {
  for (const auto& e : edges_)
    if (e.from == from && e.to == to) return e.delay_s;
  return std::nullopt;
}

double Scenario::radar_distance_m(int id_a, int id_b) const {
  const auto& pa = radars[static_cast<std::size_t>(id_a) - 1].position_m;
  const auto& pb = radars[static_cast<std::size_t>(id_b) - 1].position_m;
  return std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& path) {
  if (!obj.is_object()) throw ScenarioError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      throw ScenarioError(path + "." + it.key() + ": unknown key");
  }
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ScenarioError(path + "." + key + ": missing");
  if (!obj[key].is_number()) throw ScenarioError(path + "." + key + ": expected a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ScenarioError(path + "." + key + ": expected a number");
  return obj[key].get<double>();
}

int int_or(const json& obj, const std::string& key, int fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ScenarioError(path + "." + key + ": expected an integer");
  return obj[key].get<int>();
}

// A field that is either a number or the string "random".
std::optional<double> random_or_number(const json& obj, const std::string& key,
                                       std::optional<double> fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (v.is_string()) {
    if (v.get<std::string>() != "random")
      throw ScenarioError(path + "." + key + ": expected a number or \"random\"");
    return std::nullopt;
  }
  if (!v.is_number()) throw ScenarioError(path + "." + key + ": expected a number or \"random\"");
  return v.get<double>();
}

std::array<double, 2> pair_field(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ScenarioError(path + ": expected [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioError("config: expected a JSON object");
  reject_unknown_keys(root, {"seed", "epochs", "noise_dbm", "max_unambiguous_range_m",
                             "action_space", "radars", "target", "graph"},
                      "config");

  ScenarioConfig cfg;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
      throw ScenarioError("config.seed: expected an integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  cfg.epochs = int_or(root, "epochs", cfg.epochs, "config");
  if (cfg.epochs < 1) throw ScenarioError("config.epochs: must be >= 1");
  cfg.noise_dbm = number_or(root, "noise_dbm", cfg.noise_dbm, "config");
  cfg.max_unambiguous_range_m = number_or(root, "max_unambiguous_range_m", cfg.max_unambiguous_range_m, "config");

  if (root.contains("action_space")) {
    const json& as = root["action_space"];
    reject_unknown_keys(as, {"a_f", "delta_f_mhz", "a_t", "delta_t_us"}, "action_space");
    cfg.a_f = int_or(as, "a_f", cfg.a_f, "action_space");
    cfg.a_t = int_or(as, "a_t", cfg.a_t, "action_space");
    cfg.delta_f_hz = number_or(as, "delta_f_mhz", cfg.delta_f_hz / 1e6, "action_space") * 1e6;
    cfg.delta_t_s = number_or(as, "delta_t_us", cfg.delta_t_s / 1e-6, "action_space") * 1e-6;
  }

  if (root.contains("radars")) {
    const json& r = root["radars"];
    reject_unknown_keys(r, {"count", "f_c_ghz", "b_mhz", "b_random_range_mhz", "t_a_us", "t_pri_us",
                            "chirps_per_cpi", "p_t_dbm", "antenna_gain_dbi", "adc_rate_msps",
                            "placement", "placement_ring_radius_m", "placement_jitter_radius_m"},
                        "radars");
    cfg.radar_count = int_or(r, "count", cfg.radar_count, "radars");
    if (cfg.radar_count < 1) throw ScenarioError("radars.count: must be >= 1");
    cfg.f_c_hz = number_or(r, "f_c_ghz", cfg.f_c_hz / 1e9, "radars") * 1e9;
    cfg.b_hz = random_or_number(r, "b_mhz", std::nullopt, "radars");
    if (cfg.b_hz) cfg.b_hz = *cfg.b_hz * 1e6;
    if (!r.contains("b_mhz")) cfg.b_hz = 150e6;  // fixed nominal unless marked random
    if (r.contains("b_random_range_mhz")) {
      auto range = pair_field(r["b_random_range_mhz"], "radars.b_random_range_mhz");
      cfg.b_random_range_hz = {range[0] * 1e6, range[1] * 1e6};
    }
    cfg.t_a_s = number_or(r, "t_a_us", cfg.t_a_s / 1e-6, "radars") * 1e-6;
    cfg.t_pri_s = number_or(r, "t_pri_us", cfg.t_pri_s / 1e-6, "radars") * 1e-6;
    cfg.chirps_per_cpi = int_or(r, "chirps_per_cpi", cfg.chirps_per_cpi, "radars");
    cfg.p_t_dbm = number_or(r, "p_t_dbm", cfg.p_t_dbm, "radars");
    cfg.antenna_gain_dbi = number_or(r, "antenna_gain_dbi", cfg.antenna_gain_dbi, "radars");
    cfg.adc_rate_hz = number_or(r, "adc_rate_msps", cfg.adc_rate_hz / 1e6, "radars") * 1e6;
    if (r.contains("placement")) {
      const json& pl = r["placement"];
      if (pl.is_string()) {
        if (pl.get<std::string>() != "random")
          throw ScenarioError("radars.placement: expected \"random\" or a position list");
      } else if (pl.is_array()) {
        std::vector<std::array<double, 2>> pos;
        for (const auto& v : pl) pos.push_back(pair_field(v, "radars.placement"));
        cfg.radar_positions_m = pos;
      } else {
        throw ScenarioError("radars.placement: expected \"random\" or a position list");
      }
    }
    cfg.placement_ring_radius_m = number_or(r, "placement_ring_radius_m", cfg.placement_ring_radius_m, "radars");
    cfg.placement_jitter_radius_m = number_or(r, "placement_jitter_radius_m", cfg.placement_jitter_radius_m, "radars");
  }

  if (root.contains("target")) {
    const json& t = root["target"];
    reject_unknown_keys(t, {"placement", "placement_radius_m", "rcs_dbsm", "velocity_mps",
                            "velocity_random_range_mps"},
                        "target");
    if (t.contains("placement")) {
      const json& pl = t["placement"];
      if (pl.is_string()) {
        if (pl.get<std::string>() != "random")
          throw ScenarioError("target.placement: expected \"random\" or [x, y]");
      } else {
        cfg.target_position_m = pair_field(pl, "target.placement");
      }
    }
    cfg.target_placement_radius_m = number_or(t, "placement_radius_m", cfg.target_placement_radius_m, "target");
    cfg.target_rcs_dbsm = number_or(t, "rcs_dbsm", cfg.target_rcs_dbsm, "target");
    cfg.target_velocity_mps = random_or_number(t, "velocity_mps", std::nullopt, "target");
    if (!t.contains("velocity_mps")) cfg.target_velocity_mps = std::nullopt;  // default random
    if (t.contains("velocity_random_range_mps"))
      cfg.velocity_random_range_mps = pair_field(t["velocity_random_range_mps"], "target.velocity_random_range_mps");
  }

  if (root.contains("graph")) {
    const json& g = root["graph"];
    reject_unknown_keys(g, {"topology", "delay_us", "edges"}, "graph");
    std::string topo = g.contains("topology") ? g["topology"].get<std::string>() : "full";
    if (topo == "full") {
      cfg.full_graph = true;
      cfg.full_graph_delay_s = number_or(g, "delay_us", 0.0, "graph") * 1e-6;
    } else if (topo == "edges") {
      cfg.full_graph = false;
      if (!g.contains("edges") || !g["edges"].is_array())
        throw ScenarioError("graph.edges: missing edge list");
      for (const auto& e : g["edges"]) {
        reject_unknown_keys(e, {"from", "to", "delay_us"}, "graph.edges");
        InterferenceEdge edge;
        edge.from = static_cast<int>(require_number(e, "from", "graph.edges"));
        edge.to = static_cast<int>(require_number(e, "to", "graph.edges"));
        edge.delay_s = number_or(e, "delay_us", 0.0, "graph.edges") * 1e-6;
        cfg.explicit_edges.push_back(edge);
      }
    } else {
      throw ScenarioError("graph.topology: expected \"full\" or \"edges\"");
    }
  }

  // Structural validation that does not depend on the seed.
  if (cfg.t_a_s <= 0.0) throw ScenarioError("radars.t_a_us: must be positive");
  if (cfg.t_pri_s <= cfg.t_a_s) throw ScenarioError("radars.t_pri_us: must exceed t_a_us");
  if (cfg.chirps_per_cpi < 1) throw ScenarioError("radars.chirps_per_cpi: must be >= 1");
  if (cfg.a_f < 1 || cfg.a_t < 1) throw ScenarioError("action_space: A_f and A_t must be >= 1");
  if ((cfg.a_t - 1) * cfg.delta_t_s + cfg.t_a_s > cfg.t_pri_s)
    throw ScenarioError("action_space.a_t: last slot + t_a_us exceeds t_pri_us");
  if (cfg.radar_positions_m && static_cast<int>(cfg.radar_positions_m->size()) != cfg.radar_count)
    throw ScenarioError("radars.placement: position count != radars.count");
  if (cfg.b_hz && *cfg.b_hz <= 0.0) throw ScenarioError("radars.b_mhz: must be positive");
  return cfg;
}

Scenario realize_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  Scenario sc;
  sc.seed = seed;
  sc.epochs = cfg.epochs;
  sc.noise_dbm = cfg.noise_dbm;
  sc.max_unambiguous_range_m = cfg.max_unambiguous_range_m;
  sc.action_space = build_action_space(cfg.a_f, cfg.delta_f_hz, cfg.a_t, cfg.delta_t_s,
                                       cfg.f_c_hz, cfg.t_a_s, cfg.t_pri_s);

  Rng rng(mix_seed(seed, 0xC0FFEE));

  // Radar placement: one vertex of the regular I-gon per radar, jittered
  // uniformly inside a disk. Draw order is fixed: per radar position then
  // bandwidth, then target position, then per-radar velocities.
  const int count = cfg.radar_count;
  for (int i = 1; i <= count; ++i) {
    RadarParams rp;
    rp.id = i;
    rp.f_c_hz = cfg.f_c_hz;
    rp.t_a_s = cfg.t_a_s;
    rp.t_pri_s = cfg.t_pri_s;
    rp.chirps_per_cpi = cfg.chirps_per_cpi;
    rp.p_t_dbm = cfg.p_t_dbm;
    rp.antenna_gain_dbi = cfg.antenna_gain_dbi;
    rp.adc_rate_hz = cfg.adc_rate_hz;

    if (cfg.radar_positions_m) {
      rp.position_m = (*cfg.radar_positions_m)[static_cast<std::size_t>(i) - 1];
    } else {
      double angle = kTwoPi * (i - 1) / count;
      auto jitter = rng.in_disk(cfg.placement_jitter_radius_m);
      rp.position_m = {cfg.placement_ring_radius_m * std::cos(angle) + jitter[0],
                       cfg.placement_ring_radius_m * std::sin(angle) + jitter[1]};
    }
    rp.b_hz = cfg.b_hz ? *cfg.b_hz
                       : rng.uniform(cfg.b_random_range_hz[0], cfg.b_random_range_hz[1]);
    sc.radars.push_back(rp);
  }

  std::array<double, 2> target_pos =
      cfg.target_position_m ? *cfg.target_position_m : rng.in_disk(cfg.target_placement_radius_m);

  sc.targets.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Target t;
    t.range_m = std::hypot(sc.radars[static_cast<std::size_t>(i)].position_m[0] - target_pos[0],
                           sc.radars[static_cast<std::size_t>(i)].position_m[1] - target_pos[1]);
    t.velocity_mps = cfg.target_velocity_mps
                         ? *cfg.target_velocity_mps
                         : rng.uniform(cfg.velocity_random_range_mps[0], cfg.velocity_random_range_mps[1]);
    t.rcs_dbsm = cfg.target_rcs_dbsm;
    if (t.range_m <= 0.0 || t.range_m > cfg.max_unambiguous_range_m)
      throw ScenarioError("target: range " + std::to_string(t.range_m) + " m outside (0, R_u]");
    sc.targets[static_cast<std::size_t>(i)].push_back(t);
  }

  if (cfg.full_graph) {
    for (int a = 1; a <= count; ++a)
      for (int b = 1; b <= count; ++b)
        if (a != b) sc.graph.add_edge(a, b, cfg.full_graph_delay_s);
  } else {
    for (const auto& e : cfg.explicit_edges) {
      if (e.from < 1 || e.from > count || e.to < 1 || e.to > count)
        throw ScenarioError("graph.edges: endpoint " + std::to_string(e.from) + "->" +
                            std::to_string(e.to) + " is not a declared radar");
      sc.graph.add_edge(e.from, e.to, e.delay_s);
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& json_text) {
  ScenarioConfig cfg = parse_scenario_config(json_text);
  return realize_scenario(cfg, cfg.seed);
}

std::string scenario_to_json_text(const Scenario& sc) {
  json root;
  root["seed"] = sc.seed;
  root["epochs"] = sc.epochs;
  root["noise_dbm"] = sc.noise_dbm;
  root["max_unambiguous_range_m"] = sc.max_unambiguous_range_m;
  root["action_space"] = {{"a_f", sc.action_space.subband_count()},
                          {"delta_f_hz", sc.action_space.delta_f_hz()},
                          {"a_t", sc.action_space.slot_count()},
                          {"delta_t_s", sc.action_space.delta_t_s()},
                          {"f_c_hz", sc.action_space.carrier_hz()}};
  json radars = json::array();
  for (const auto& r : sc.radars) {
    radars.push_back({{"id", r.id},
                      {"f_c_hz", r.f_c_hz},
                      {"b_hz", r.b_hz},
                      {"t_a_s", r.t_a_s},
                      {"t_pri_s", r.t_pri_s},
                      {"chirps_per_cpi", r.chirps_per_cpi},
                      {"p_t_dbm", r.p_t_dbm},
                      {"position_m", {r.position_m[0], r.position_m[1]}},
                      {"antenna_gain_dbi", r.antenna_gain_dbi},
                      {"adc_rate_hz", r.adc_rate_hz}});
  }
  root["radars"] = radars;
  json targets = json::array();
  for (const auto& list : sc.targets) {
    json per_radar = json::array();
    for (const auto& t : list)
      per_radar.push_back({{"range_m", t.range_m},
                           {"velocity_mps", t.velocity_mps},
                           {"rcs_dbsm", t.rcs_dbsm}});
    targets.push_back(per_radar);
  }
  root["targets"] = targets;
  json edges = json::array();
  for (const auto& e : sc.graph.edges())
    edges.push_back({{"from", e.from}, {"to", e.to}, {"delay_s", e.delay_s}});
  root["edges"] = edges;
  return root.dump();
}

Scenario scenario_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  Scenario sc;
  sc.seed = root.at("seed").get<std::uint64_t>();
  sc.epochs = root.at("epochs").get<int>();
  sc.noise_dbm = root.at("noise_dbm").get<double>();
  sc.max_unambiguous_range_m = root.at("max_unambiguous_range_m").get<double>();
  const json& as = root.at("action_space");
  sc.action_space = ActionSpace(as.at("a_f").get<int>(), as.at("delta_f_hz").get<double>(),
                                as.at("a_t").get<int>(), as.at("delta_t_s").get<double>(),
                                as.at("f_c_hz").get<double>());
  for (const auto& r : root.at("radars")) {
    RadarParams rp;
    rp.id = r.at("id").get<int>();
    rp.f_c_hz = r.at("f_c_hz").get<double>();
    rp.b_hz = r.at("b_hz").get<double>();
    rp.t_a_s = r.at("t_a_s").get<double>();
    rp.t_pri_s = r.at("t_pri_s").get<double>();
    rp.chirps_per_cpi = r.at("chirps_per_cpi").get<int>();
    rp.p_t_dbm = r.at("p_t_dbm").get<double>();
    rp.position_m = {r.at("position_m")[0].get<double>(), r.at("position_m")[1].get<double>()};
    rp.antenna_gain_dbi = r.at("antenna_gain_dbi").get<double>();
    rp.adc_rate_hz = r.at("adc_rate_hz").get<double>();
    sc.radars.push_back(rp);
  }
  for (const auto& list : root.at("targets")) {
    std::vector<Target> per_radar;
    for (const auto& t : list) {
      Target tg;
      tg.range_m = t.at("range_m").get<double>();
      tg.velocity_mps = t.at("velocity_mps").get<double>();
      tg.rcs_dbsm = t.at("rcs_dbsm").get<double>();
      per_radar.push_back(tg);
    }
    sc.targets.push_back(per_radar);
  }
  for (const auto& e : root.at("edges"))
    sc.graph.add_edge(e.at("from").get<int>(), e.at("to").get<int>(), e.at("delay_s").get<double>());
  return sc;
}

std::string table1_config_json(int radar_count, std::uint64_t seed, int epochs) {
  json root;
  root["seed"] = seed;
  root["epochs"] = epochs;
  root["noise_dbm"] = -88.0;
  root["max_unambiguous_range_m"] = 200.0;
  root["action_space"] = {{"a_f", 3}, {"delta_f_mhz", 150.0}, {"a_t", 7}, {"delta_t_us", 3.0}};
  root["radars"] = {{"count", radar_count},
                    {"f_c_ghz", 77.0},
                    {"b_mhz", "random"},
                    {"t_a_us", 8.89},
                    {"t_pri_us", 29.99},
                    {"chirps_per_cpi", 256},
                    {"p_t_dbm", 13.0},
                    {"antenna_gain_dbi", 20.0},
                    {"adc_rate_msps", 10.0},
                    {"placement", "random"}};
  root["target"] = {{"placement", "random"}, {"rcs_dbsm", 20.0}, {"velocity_mps", "random"}};
  root["graph"] = {{"topology", "full"}, {"delay_us", 0.0}};
  return root.dump(2);
}

}  // namespace tfhop
