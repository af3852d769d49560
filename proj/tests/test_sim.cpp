#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "d2d/errors.hpp"
#include "d2d/sim.hpp"

using namespace d2d;

namespace {

MonteCarloConfig small_sweep() {
  MonteCarloConfig mc;
  mc.runs = 3;
  mc.link_lengths_m = {50, 150};
  mc.links_per_run = 60;
  mc.cdf_link_length_m = 50;
  mc.threads = 1;
  return mc;
}

TopologyConfig small_topology() {
  TopologyConfig t;
  t.num_links = 60;
  return t;
}

}  // namespace

TEST_CASE("cdf of a tiny sample") {
  const auto cdf = tx_power_cdf({-10.0, 0.0, -10.0});
  REQUIRE(cdf.size() == 2);
  CHECK(cdf[0].first == -10.0);
  CHECK(cdf[0].second == doctest::Approx(2.0 / 3.0));
  CHECK(cdf[1].first == 0.0);
  CHECK(cdf[1].second == 1.0);
  CHECK_THROWS(tx_power_cdf({}));
}

TEST_CASE("cell seeds") {
  CHECK(cell_seed(1, 50.0, 0) == cell_seed(1, 50.0, 0));
  CHECK(cell_seed(1, 50.0, 0) != cell_seed(1, 50.0, 1));
  CHECK(cell_seed(1, 50.0, 0) != cell_seed(1, 60.0, 0));
  CHECK(cell_seed(1, 50.0, 0) != cell_seed(2, 50.0, 0));
}

TEST_CASE("config validation") {
  MonteCarloConfig mc = small_sweep();
  mc.runs = 0;
  CHECK_THROWS_AS(validate(mc), ConfigError);
  mc = small_sweep();
  mc.link_lengths_m = {100, 50};
  CHECK_THROWS_AS(validate(mc), ConfigError);
  mc = small_sweep();
  mc.schemes = {Scheme::DD, Scheme::DD};
  CHECK_THROWS_AS(validate(mc), ConfigError);
}

TEST_CASE("sweep records") {
  const auto s = run_monte_carlo(small_sweep(), small_topology(), PowerControlParams{}, ProblemConfig{});
  REQUIRE(s.records.size() == 8);
  // ordered by scheme, then length
  CHECK(s.records[0].scheme == Scheme::JC);
  CHECK(s.records[0].link_length_m == 50.0);
  CHECK(s.records[1].link_length_m == 150.0);
  CHECK(s.records[7].scheme == Scheme::HD);
  for (double len : {50.0, 150.0}) {
    CHECK(s.find(Scheme::DD, len)->normalized_interference_db == 0.0);
    // link-granular schemes always block one RB per link
    CHECK(s.find(Scheme::JC, len)->mean_rb_per_bs == doctest::Approx(60.0 / 23.0).epsilon(1e-12));
    CHECK(s.find(Scheme::JD, len)->mean_rb_per_bs == doctest::Approx(60.0 / 23.0).epsilon(1e-12));
    const double dd = s.find(Scheme::DD, len)->mean_ul_interference_mw;
    for (Scheme sc : {Scheme::JC, Scheme::JD, Scheme::HD}) {
      const auto* r = s.find(sc, len);
      CHECK(r->mean_ul_interference_mw >= dd * (1 - 1e-12));
      CHECK(r->normalized_interference_db ==
            doctest::Approx(10 * std::log10(r->mean_ul_interference_mw / dd)).epsilon(1e-12));
      CHECK(r->runs == 3);
    }
  }
  for (const auto& r : s.records) CHECK(r.tx_power_samples_dbm.size() == 3u * 120u);
  CHECK(s.find(Scheme::HD, 50.0)->optimal_runs == 3);
  CHECK(s.find(Scheme::DD, 75.0) == nullptr);
}

TEST_CASE("sweep independent of thread count") {
  auto mc = small_sweep();
  const auto a = run_monte_carlo(mc, small_topology(), PowerControlParams{}, ProblemConfig{});
  mc.threads = 4;
  const auto b = run_monte_carlo(mc, small_topology(), PowerControlParams{}, ProblemConfig{});
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].mean_ul_interference_mw == b.records[i].mean_ul_interference_mw);
    CHECK(a.records[i].mean_rb_per_bs == b.records[i].mean_rb_per_bs);
    CHECK(a.records[i].tx_power_samples_dbm == b.records[i].tx_power_samples_dbm);
  }
}

TEST_CASE("adding a length keeps existing cells") {
  auto mc = small_sweep();
  mc.schemes = {Scheme::DD};
  const auto a = run_monte_carlo(mc, small_topology(), PowerControlParams{}, ProblemConfig{});
  mc.link_lengths_m = {50, 100, 150};
  const auto b = run_monte_carlo(mc, small_topology(), PowerControlParams{}, ProblemConfig{});
  CHECK(a.find(Scheme::DD, 150)->mean_ul_interference_mw ==
        b.find(Scheme::DD, 150)->mean_ul_interference_mw);
}

TEST_CASE("normalization needs DD") {
  auto mc = small_sweep();
  mc.schemes = {Scheme::JC};
  const auto s = run_monte_carlo(mc, small_topology(), PowerControlParams{}, ProblemConfig{});
  CHECK(std::isnan(s.records[0].normalized_interference_db));
}

TEST_CASE("infeasible cell reports its seed") {
  auto mc = small_sweep();
  ProblemConfig cfg;
  cfg.capacity_per_bs = 1;
  try {
    run_monte_carlo(mc, small_topology(), PowerControlParams{}, cfg);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("seed") != std::string::npos);
  }
}

TEST_CASE("tx powers and resource usage of a drop") {
  TopologyConfig t = small_topology();
  const auto p = make_problem(generate_scenario(t, 1), PowerControlParams{}, ProblemConfig{});
  const auto dd = solve_dd(p);
  const auto jc = solve_jc(p);
  const auto tx = device_tx_powers_dbm(p, PowerControlParams{}, dd);
  REQUIRE(tx.size() == 120);
  for (std::size_t u = 0; u < 120; ++u)
    CHECK(tx[u] == tx_power_dbm(PowerControlParams{}, p.loss_db(u, dd.serving_bs[u])));
  CHECK(resource_usage(p, jc) == doctest::Approx(60.0 / 23.0));
  CHECK(resource_usage(p, dd) == doctest::Approx(static_cast<double>(resource_blocks(p, dd)) / 23.0));
}

TEST_CASE("HD at an open threshold uses the JD resources") {
  auto mc = small_sweep();
  mc.schemes = {Scheme::JD, Scheme::HD};
  ProblemConfig cfg;
  cfg.i_th_dbm = std::numeric_limits<double>::infinity();
  const auto s = run_monte_carlo(mc, small_topology(), PowerControlParams{}, cfg);
  for (double len : {50.0, 150.0})
    CHECK(s.find(Scheme::HD, len)->mean_rb_per_bs == s.find(Scheme::JD, len)->mean_rb_per_bs);
}

TEST_CASE("RB usage within its bounds") {
  const auto s = run_monte_carlo(small_sweep(), small_topology(), PowerControlParams{}, ProblemConfig{});
  for (const auto& r : s.records) {
    CHECK(r.mean_rb_per_bs >= 60.0 / 23.0 - 1e-12);
    CHECK(r.mean_rb_per_bs <= 120.0 / 23.0 + 1e-12);
    CHECK(r.mean_ul_interference_mw > 0.0);
  }
}

TEST_CASE("mean DD tx power not above JC per drop") {
  TopologyConfig t;
  PowerControlParams pc;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    t.link_length_m = 100.0;
    const auto p = make_problem(generate_scenario(t, seed), pc, ProblemConfig{});
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / v.size();
    };
    CHECK(mean(device_tx_powers_dbm(p, pc, solve_dd(p))) <=
          mean(device_tx_powers_dbm(p, pc, solve_jc(p))));
  }
}
