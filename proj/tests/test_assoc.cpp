#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "d2d/assoc.hpp"
#include "d2d/errors.hpp"
#include "d2d/oracle.hpp"
#include "d2d/rng.hpp"

using namespace d2d;

namespace {

Scenario instance_a() {
  std::vector<BaseStation> bss(2);
  bss[0] = {0, BsKind::Macro, {}, 46.0};
  bss[1] = {1, BsKind::Small, {}, 30.0};
  Matrix<double> loss(2, 2);
  loss(0, 0) = 100;
  loss(0, 1) = 80;
  loss(1, 0) = 110;
  loss(1, 1) = 70;
  return make_explicit_scenario(bss, loss);
}

AssociationProblem desk_problem(std::uint64_t seed, std::size_t links = 100) {
  TopologyConfig topo;
  topo.num_links = links;
  topo.link_length_m = 100.0;
  return make_problem(generate_scenario(topo, seed), PowerControlParams{}, ProblemConfig{});
}

bool rel_eq(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("scheme names") {
  for (Scheme s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
  CHECK(parse_scheme("hd") == Scheme::HD);
  CHECK_THROWS_AS(parse_scheme("xx"), ConfigError);
}

TEST_CASE("two-BS instance across schemes") {
  ProblemConfig cfg;
  const auto p = make_problem(instance_a(), PowerControlParams{}, cfg);

  const auto jc = solve_jc(p);
  CHECK(jc.serving_bs == std::vector<std::size_t>{1, 1});
  CHECK(jc.joint_bs[0] == std::optional<std::size_t>{1});

  const auto jd = solve_jd(p);
  CHECK(jd.serving_bs == std::vector<std::size_t>{1, 1});
  CHECK(jd.objective_mw == doctest::Approx(1.2758485742824658e-13).epsilon(1e-9));

  const auto dd = solve_dd(p);
  CHECK(dd.serving_bs == std::vector<std::size_t>{1, 1});
  CHECK(dd.objective_mw == doctest::Approx(2.5516971485649316e-13).epsilon(1e-9));
  CHECK(mw_to_dbm(dd.objective_mw) == doctest::Approx(-125.932).epsilon(1e-5));

  // Pair sum -125.93 dBm: joint under -120 dBm, not under -130 dBm.
  cfg.i_th_dbm = -120.0;
  const auto hd_loose = solve_hd(make_problem(instance_a(), PowerControlParams{}, cfg));
  CHECK(hd_loose.joint_count == 1);
  CHECK(hd_loose.joint_bs[0] == std::optional<std::size_t>{1});

  cfg.i_th_dbm = -130.0;
  const auto hd_tight = solve_hd(make_problem(instance_a(), PowerControlParams{}, cfg));
  CHECK(hd_tight.joint_count == 0);
  CHECK(hd_tight.serving_bs == dd.serving_bs);
  CHECK(hd_tight.objective_mw == doctest::Approx(dd.objective_mw).epsilon(1e-12));
}

TEST_CASE("resource blocks") {
  // 10 links over 5 BSs: all joint = 2 RB per BS, all split = 4.
  std::vector<BaseStation> bss(5);
  Matrix<double> loss(20, 5, 100.0);
  for (std::size_t u = 0; u < 20; ++u) loss(u, (u / 2) % 5) = 80.0;
  const auto p = make_problem(make_explicit_scenario(bss, loss), PowerControlParams{}, ProblemConfig{});
  Assignment joint, split;
  for (std::size_t l = 0; l < 10; ++l) {
    joint.serving_bs.push_back(l % 5);
    joint.serving_bs.push_back(l % 5);
    split.serving_bs.push_back(l % 5);
    split.serving_bs.push_back((l + 1) % 5);
  }
  joint.joint_bs.assign(10, std::nullopt);
  split.joint_bs.assign(10, std::nullopt);
  CHECK(resource_blocks(p, joint) == 10);
  CHECK(resource_blocks(p, split) == 20);
}

TEST_CASE("dominance chain on desk instances") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = desk_problem(seed);
    const auto jc = solve_jc(p), jd = solve_jd(p), dd = solve_dd(p), hd = solve_hd(p);
    const double ijc = total_interference_mw(p, jc), ijd = total_interference_mw(p, jd);
    const double idd = total_interference_mw(p, dd), ihd = total_interference_mw(p, hd);
    CHECK(idd <= ihd);
    CHECK(ihd <= ijd);
    CHECK(ijd <= ijc);
    CHECK(hd.optimal);
    for (Scheme s : kAllSchemes) {
      const auto a = solve(p, s);
      CHECK(validate_assignment(p, s, a).empty());
    }
  }
}

TEST_CASE("JD and DD match the oracle on small instances") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<BaseStation> bss(2 + rng.below(2));
    Matrix<double> loss(2 * (2 + rng.below(2)), bss.size());
    for (std::size_t u = 0; u < loss.rows(); ++u)
      for (std::size_t b = 0; b < loss.cols(); ++b) loss(u, b) = rng.uniform(60.0, 140.0);
    ProblemConfig cfg;
    cfg.capacity_per_bs = static_cast<int>(loss.rows());
    const auto p = make_problem(make_explicit_scenario(bss, loss), PowerControlParams{}, cfg);
    CHECK(rel_eq(solve_jd(p).objective_mw, oracle_exhaustive(p, Scheme::JD).objective_mw));
    CHECK(rel_eq(solve_dd(p).objective_mw, oracle_exhaustive(p, Scheme::DD).objective_mw));
  }
}

TEST_CASE("HD limits") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    TopologyConfig topo;
    topo.num_links = 60;
    const Scenario sc = generate_scenario(topo, seed);
    ProblemConfig cfg;
    cfg.capacity_per_bs = 200;
    cfg.i_th_dbm = std::numeric_limits<double>::infinity();
    cfg.n_closest = 23;
    auto p = make_problem(sc, PowerControlParams{}, cfg);
    const auto open = solve_hd(p);
    CHECK(open.joint_count == 60);
    // JD's objective is the mean per link; the device sum is twice that.
    CHECK(rel_eq(open.objective_mw, 2.0 * solve_jd(p).objective_mw));

    cfg.i_th_dbm = -300.0;
    p = make_problem(sc, PowerControlParams{}, cfg);
    const auto closed = solve_hd(p);
    CHECK(closed.joint_count == 0);
    CHECK(rel_eq(closed.objective_mw, solve_dd(p).objective_mw));
  }
}

TEST_CASE("HD joint count grows with the threshold") {
  const Scenario sc = [] {
    TopologyConfig topo;
    topo.num_links = 60;
    topo.link_length_m = 30.0;
    return generate_scenario(topo, 4);
  }();
  std::size_t prev = 0;
  for (double th = -150.0; th <= -100.0; th += 10.0) {
    ProblemConfig cfg;
    cfg.i_th_dbm = th;
    const auto p = make_problem(sc, PowerControlParams{}, cfg);
    const auto hd = solve_hd(p);
    REQUIRE(hd.optimal);
    CHECK(hd.joint_count >= prev);
    CHECK(validate_assignment(p, Scheme::HD, hd).empty());
    prev = hd.joint_count;
  }
}

TEST_CASE("candidates") {
  const auto p = desk_problem(2, 10);
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto c = hd_candidates(p, l);
    REQUIRE(c.size() == 4);
    for (std::size_t i = 1; i < c.size(); ++i)
      CHECK(pair_interference_mw(p, l, c[i - 1]) <= pair_interference_mw(p, l, c[i]));
    // the JD argmin is always a candidate
    std::size_t best = 0;
    for (std::size_t b = 1; b < p.num_bs(); ++b)
      if (p.tables.link_cost_mw(l, b) < p.tables.link_cost_mw(l, best)) best = b;
    CHECK(std::find(c.begin(), c.end(), best) != c.end());
  }
}

TEST_CASE("validator catches violations") {
  const auto p = make_problem(instance_a(), PowerControlParams{}, ProblemConfig{});
  Assignment a = solve_dd(p);
  CHECK(validate_assignment(p, Scheme::DD, a).empty());
  Assignment bad = a;
  bad.serving_bs = {1, 0};  // split link still flagged joint
  CHECK_FALSE(validate_assignment(p, Scheme::DD, bad).empty());
  Assignment hd = a;
  hd.joint_bs[0] = 1;  // above the -130 dBm threshold
  CHECK_FALSE(validate_assignment(p, Scheme::HD, hd).empty());

  ProblemConfig tight;
  tight.capacity_override = {1, 1};
  const auto q = make_problem(instance_a(), PowerControlParams{}, tight);
  CHECK_FALSE(validate_assignment(q, Scheme::DD, a).empty());
  CHECK(validate_assignment(q, Scheme::JD, a).empty());
}

TEST_CASE("infeasible capacities") {
  ProblemConfig cfg;
  cfg.capacity_override = {0, 1};
  const auto p = make_problem(instance_a(), PowerControlParams{}, cfg);
  CHECK_THROWS_AS(solve_dd(p), InfeasibleError);
  CHECK_THROWS_AS(solve_hd(p), InfeasibleError);
  CHECK_NOTHROW(solve_jd(p));
}

TEST_CASE("single BS") {
  std::vector<BaseStation> bss(1);
  const auto p = make_problem(make_explicit_scenario(bss, Matrix<double>(2, 1, 90.0)),
                              PowerControlParams{}, ProblemConfig{});
  CHECK(std::isnan(solve_jc(p).objective_mw));
  CHECK_THROWS_AS(solve_dd(p), InterferenceError);
  CHECK_THROWS_AS(solve_hd(p), InterferenceError);
}

TEST_CASE("solvers are deterministic") {
  const auto p = desk_problem(9, 50);
  for (Scheme s : kAllSchemes) {
    const auto a = solve(p, s), b = solve(p, s);
    CHECK(a.serving_bs == b.serving_bs);
    CHECK(a.objective_mw == b.objective_mw);
  }
}

TEST_CASE("equal costs give the lexicographically smallest assignment") {
  std::vector<BaseStation> bss(3);
  const auto p = make_problem(make_explicit_scenario(bss, Matrix<double>(4, 3, 90.0)),
                              PowerControlParams{}, ProblemConfig{});
  for (Scheme s : kAllSchemes)
    CHECK(solve(p, s).serving_bs == std::vector<std::size_t>{0, 0, 0, 0});
  ProblemConfig cfg;
  cfg.capacity_override = {1, 1, 2};
  const auto q = make_problem(make_explicit_scenario(bss, Matrix<double>(4, 3, 90.0)),
                              PowerControlParams{}, cfg);
  CHECK(solve_dd(q).serving_bs == std::vector<std::size_t>{0, 1, 2, 2});
  CHECK(oracle_exhaustive(q, Scheme::DD).serving_bs == std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("single BS JC serves everyone there") {
  std::vector<BaseStation> bss(1);
  const auto p = make_problem(make_explicit_scenario(bss, Matrix<double>(6, 1, 90.0)),
                              PowerControlParams{}, ProblemConfig{});
  CHECK(solve_jc(p).serving_bs == std::vector<std::size_t>(6, 0));
}
