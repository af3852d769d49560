#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "d2d/errors.hpp"
#include "d2d/topology.hpp"

using namespace d2d;

TEST_CASE("pathloss hand values") {
  ChannelModel m;
  CHECK(pathloss_db(m, BsKind::Macro, 1000.0, 0.0) == doctest::Approx(128.1).epsilon(1e-12));
  CHECK(pathloss_db(m, BsKind::Small, 100.0, 0.0) == doctest::Approx(104.0).epsilon(1e-12));
  // shadowing adds in dB
  CHECK(pathloss_db(m, BsKind::Small, 100.0, 3.5) == doctest::Approx(107.5).epsilon(1e-12));
}

TEST_CASE("pathloss floors at the minimum coupling loss") {
  ChannelModel m;
  CHECK(pathloss_db(m, BsKind::Small, 1.0, -60.0) == 45.0);
  CHECK(pathloss_db(m, BsKind::Small, 0.0, 0.0) == pathloss_db(m, BsKind::Small, 1.0, 0.0));
}

TEST_CASE("pathloss nondecreasing in distance") {
  ChannelModel m;
  for (BsKind k : {BsKind::Macro, BsKind::Small}) {
    double prev = pathloss_db(m, k, 0.5, 0.0);
    for (double d = 1.0; d < 3000.0; d *= 1.07) {
      const double now = pathloss_db(m, k, d, 0.0);
      CHECK(now >= prev);
      prev = now;
    }
  }
}

TEST_CASE("generated scenario shape and invariants") {
  TopologyConfig cfg;
  cfg.num_links = 60;
  cfg.link_length_m = 80.0;
  const Scenario sc = generate_scenario(cfg, 7);
  REQUIRE(sc.num_bs() == 23);
  REQUIRE(sc.links.size() == 60);
  REQUIRE(sc.devices.size() == 120);
  CHECK(sc.gain.num_devices() == 120);
  CHECK(sc.gain.num_bs() == 23);

  std::size_t macros = 0;
  for (const auto& bs : sc.base_stations) {
    if (bs.kind == BsKind::Macro) {
      ++macros;
      CHECK(bs.tx_power_dbm == 46.0);
    } else {
      CHECK(bs.tx_power_dbm == 30.0);
    }
    CHECK(bs.position.x >= 0.0);
    CHECK(bs.position.x <= 1000.0);
    CHECK(bs.position.y >= 0.0);
    CHECK(bs.position.y <= 1000.0);
  }
  CHECK(macros == 2);
  for (std::size_t a = 0; a < sc.num_bs(); ++a)
    for (std::size_t b = a + 1; b < sc.num_bs(); ++b)
      CHECK(distance(sc.base_stations[a].position, sc.base_stations[b].position) >= 40.0);

  for (const auto& link : sc.links) {
    const auto& d1 = sc.devices[link.device_ids[0]];
    const auto& d2 = sc.devices[link.device_ids[1]];
    CHECK(d1.link_id == link.id);
    CHECK(d2.link_id == link.id);
    CHECK(distance(d1.position, d2.position) == doctest::Approx(80.0).epsilon(1e-9));
    CHECK(link.length_m == 80.0);
    for (const auto* d : {&d1, &d2}) {
      CHECK(d->position.x >= 0.0);
      CHECK(d->position.x <= 1000.0);
      CHECK(d->position.y >= 0.0);
      CHECK(d->position.y <= 1000.0);
    }
  }
  for (std::size_t u = 0; u < 120; ++u)
    for (std::size_t b = 0; b < 23; ++b) {
      CHECK(sc.gain.loss(u, b) >= 45.0);
      CHECK(sc.gain.gain_db(u, b) == -sc.gain.loss(u, b));
    }
}

TEST_CASE("generation is a pure function of config and seed") {
  TopologyConfig cfg;
  cfg.num_links = 40;
  CHECK(generate_scenario(cfg, 11) == generate_scenario(cfg, 11));
  CHECK_FALSE(generate_scenario(cfg, 11) == generate_scenario(cfg, 12));
}

TEST_CASE("zero shadowing reproduces the deterministic pathloss") {
  TopologyConfig cfg;
  cfg.num_links = 10;
  cfg.channel.shadowing_sigma_macro_db = 0.0;
  cfg.channel.shadowing_sigma_small_db = 0.0;
  const Scenario sc = generate_scenario(cfg, 3);
  for (const auto& dev : sc.devices)
    for (const auto& bs : sc.base_stations)
      CHECK(sc.gain.loss(dev.id, bs.id) ==
            doctest::Approx(pathloss_db(cfg.channel, bs, dev, 0.0)).epsilon(1e-12));
}

TEST_CASE("link length range draws within bounds") {
  TopologyConfig cfg;
  cfg.num_links = 50;
  cfg.length_range = LinkLengthRange{20.0, 60.0};
  const Scenario sc = generate_scenario(cfg, 5);
  for (const auto& link : sc.links) {
    CHECK(link.length_m >= 20.0);
    CHECK(link.length_m <= 60.0);
    const double d = distance(sc.devices[link.device_ids[0]].position,
                              sc.devices[link.device_ids[1]].position);
    CHECK(d == doctest::Approx(link.length_m).epsilon(1e-9));
  }
}

TEST_CASE("hotspot drops stay inside the area") {
  TopologyConfig cfg;
  cfg.num_links = 30;
  cfg.hotspot_fraction = 1.0;
  const Scenario sc = generate_scenario(cfg, 9);
  for (const auto& d : sc.devices) {
    CHECK(d.position.x >= 0.0);
    CHECK(d.position.x <= 1000.0);
  }
}

TEST_CASE("impossible spacing raises") {
  TopologyConfig cfg;
  cfg.area_width_m = 50.0;
  cfg.area_height_m = 50.0;
  CHECK_THROWS_AS(generate_scenario(cfg, 1), GenerationError);
}

TEST_CASE("explicit scenario wiring") {
  std::vector<BaseStation> bss(2);
  bss[0].id = 0;
  bss[0].kind = BsKind::Macro;
  bss[0].tx_power_dbm = 46.0;
  bss[1].id = 1;
  Matrix<double> loss(4, 2, 90.0);
  const Scenario sc = make_explicit_scenario(bss, loss);
  REQUIRE(sc.links.size() == 2);
  CHECK(sc.links[1].device_ids == std::array<std::size_t, 2>{2, 3});
  CHECK(sc.devices[3].link_id == 1);
  CHECK(sc.gain.loss_db == loss);
}
