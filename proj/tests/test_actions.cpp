#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "tfhop/actions.hpp"
#include "tfhop/mixed_strategy.hpp"
#include "tfhop/scenario.hpp"

using namespace tfhop;

TEST_CASE("action space of the reference experiment has 21 actions") {
  ActionSpace space = build_action_space(3, 150e6, 7, 3e-6, 77e9);
  CHECK(space.size() == 21);
  CHECK(space.subband_count() == 3);
  CHECK(space.slot_count() == 7);
}

TEST_CASE("degenerate 1x1 grid is the single action (f_c, 0)") {
  ActionSpace space = build_action_space(1, 1e6, 1, 1e-6, 77e9);
  CHECK(space.size() == 1);
  CHECK(space.at(1).f_hz == 77e9);
  CHECK(space.at(1).t_s == 0.0);
}

TEST_CASE("start frequencies follow f_a = f_c + (a-1) df") {
  ActionSpace space = build_action_space(2, 150e6, 1, 1e-6, 77e9);
  CHECK(space.at(1).f_hz == doctest::Approx(77e9).epsilon(1e-15));
  CHECK(space.at(2).f_hz == doctest::Approx(77.15e9).epsilon(1e-15));
}

TEST_CASE("stored physical values match recomputation from indices exactly") {
  ActionSpace space = build_action_space(3, 150e6, 7, 3e-6, 77e9);
  for (const JointAction& act : space.actions()) {
    CHECK(act.f_hz == 77e9 + (act.a - 1) * 150e6);
    CHECK(act.t_s == (act.b - 1) * 3e-6);
  }
  // Row-major by (a, b).
  CHECK(space.at(1).a == 1);
  CHECK(space.at(1).b == 1);
  CHECK(space.at(2).b == 2);
  CHECK(space.at(8).a == 2);
  CHECK(space.at(8).b == 1);
  CHECK(space.flat_index(3, 7) == 21);
}

TEST_CASE("empty grids and oversized slot sets are rejected") {
  CHECK_THROWS(build_action_space(0, 150e6, 7, 3e-6, 77e9));
  CHECK_THROWS(build_action_space(3, 150e6, 0, 3e-6, 77e9));
  CHECK_THROWS(build_action_space(3, -1.0, 7, 3e-6, 77e9));
  // Slot grid must fit the dwell: t_7 + T_a = 18 + 8.89 us vs T_pri.
  CHECK_NOTHROW(build_action_space(3, 150e6, 7, 3e-6, 77e9, 8.89e-6, 29.99e-6));
  CHECK_THROWS(build_action_space(3, 150e6, 9, 3e-6, 77e9, 8.89e-6, 29.99e-6));
}

TEST_CASE("fixed assignment wraps modulo the action count") {
  ActionSpace space = build_action_space(3, 150e6, 7, 3e-6, 77e9);
  CHECK(nash_assignment_flat(1, 21) == 1);
  CHECK(nash_assignment_flat(22, 21) == 1);
  CHECK(nash_assignment_flat(5, 21) == 5);
  CHECK(nash_assignment(5, space).a == space.at(5).a);

  // Over one full cycle the assignment is a bijection onto the action space.
  std::set<int> seen;
  for (int i = 1; i <= 21; ++i) seen.insert(nash_assignment_flat(i, 21));
  CHECK(seen.size() == 21);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 21);
}

TEST_CASE("uniform strategy") {
  MixedStrategy p = uniform_strategy(21);
  double total = 0.0;
  for (double v : p.probs) {
    CHECK(v == doctest::Approx(1.0 / 21).epsilon(1e-15));
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(uniform_strategy(1).probs == std::vector<double>{1.0});
  CHECK(uniform_strategy(4).probs == std::vector<double>(4, 0.25));
  CHECK_THROWS(uniform_strategy(0));
}

TEST_CASE("reference config loads with the reported CPI parameters") {
  Scenario sc = load_scenario(table1_config_json());
  CHECK(sc.radar_count() == 4);
  REQUIRE(!sc.radars.empty());
  CHECK(sc.radars[0].chirps_per_cpi == 256);
  CHECK(sc.radars[0].t_pri_s == doctest::Approx(29.99e-6).epsilon(1e-12));
  CHECK(sc.radars[0].t_a_s == doctest::Approx(8.89e-6).epsilon(1e-12));
  CHECK(sc.radars[0].f_c_hz == 77e9);
  CHECK(sc.noise_dbm == -88.0);
  CHECK(sc.action_space.size() == 21);
  // Heterogeneous bandwidths inside the configured band.
  for (const auto& r : sc.radars) {
    CHECK(r.b_hz >= 110e6);
    CHECK(r.b_hz <= 150e6);
  }
  // Every edge endpoint is a declared radar; full graph has I(I-1) edges.
  CHECK(sc.graph.edges().size() == 12);
  for (const auto& e : sc.graph.edges()) {
    CHECK(e.from >= 1);
    CHECK(e.from <= 4);
    CHECK(e.to >= 1);
    CHECK(e.to <= 4);
    CHECK(e.from != e.to);
  }
}

TEST_CASE("invalid configs are rejected with the offending field named") {
  // T_a > T_pri
  std::string bad = R"({"radars": {"t_a_us": 40.0, "t_pri_us": 29.99}})";
  CHECK_THROWS_WITH_AS(load_scenario(bad), doctest::Contains("t_pri_us"), ScenarioError);
  // unknown key
  CHECK_THROWS_WITH_AS(load_scenario(R"({"radar_count": 4})"), doctest::Contains("radar_count"),
                       ScenarioError);
  CHECK_THROWS_AS(load_scenario("not json"), ScenarioError);
  // slot set must fit the dwell
  std::string slots = R"({"action_space": {"a_t": 9}})";
  CHECK_THROWS_AS(load_scenario(slots), ScenarioError);
}

TEST_CASE("scenario loading is a pure function of config and seed") {
  std::string cfg = table1_config_json(4, 7);
  Scenario a = load_scenario(cfg);
  Scenario b = load_scenario(cfg);
  REQUIRE(a.radar_count() == b.radar_count());
  for (int i = 0; i < a.radar_count(); ++i) {
    CHECK(a.radars[i].position_m == b.radars[i].position_m);
    CHECK(a.radars[i].b_hz == b.radars[i].b_hz);
    CHECK(a.targets[i][0].range_m == b.targets[i][0].range_m);
    CHECK(a.targets[i][0].velocity_mps == b.targets[i][0].velocity_mps);
  }
  // Different seed moves the geometry.
  Scenario c = realize_scenario(parse_scenario_config(cfg), 8);
  bool any_moved = false;
  for (int i = 0; i < a.radar_count(); ++i)
    any_moved = any_moved || a.radars[i].position_m != c.radars[i].position_m;
  CHECK(any_moved);
}

TEST_CASE("randomized geometry stays inside the configured disks") {
  ScenarioConfig cfg = parse_scenario_config(table1_config_json());
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Scenario sc = realize_scenario(cfg, seed);
    for (int i = 0; i < sc.radar_count(); ++i) {
      double angle = 2.0 * kPi * i / sc.radar_count();
      double vx = 25.0 * std::cos(angle);
      double vy = 25.0 * std::sin(angle);
      double d = std::hypot(sc.radars[i].position_m[0] - vx, sc.radars[i].position_m[1] - vy);
      CHECK(d <= 5.0 + 1e-9);
      const Target& t = sc.targets[i][0];
      CHECK(t.velocity_mps >= -25.0);
      CHECK(t.velocity_mps <= 25.0);
      CHECK(t.range_m > 0.0);
      CHECK(t.range_m <= sc.max_unambiguous_range_m);
    }
  }
}

TEST_CASE("scenario JSON round trip preserves the realized scenario") {
  Scenario sc = load_scenario(table1_config_json(4, 3));
  Scenario back = scenario_from_json_text(scenario_to_json_text(sc));
  CHECK(back.radar_count() == sc.radar_count());
  for (int i = 0; i < sc.radar_count(); ++i) {
    CHECK(back.radars[i].b_hz == sc.radars[i].b_hz);
    CHECK(back.radars[i].position_m == sc.radars[i].position_m);
    CHECK(back.targets[i][0].range_m == sc.targets[i][0].range_m);
  }
  CHECK(back.action_space.size() == sc.action_space.size());
  CHECK(back.graph.edges().size() == sc.graph.edges().size());
}
