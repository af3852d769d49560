#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "d2d/assoc.hpp"
#include "d2d/errors.hpp"
#include "d2d/oracle.hpp"

using namespace d2d;

namespace {

AssociationProblem two_bs(double i_th_dbm) {
  std::vector<BaseStation> bss(2);
  bss[0] = {0, BsKind::Macro, {}, 46.0};
  bss[1] = {1, BsKind::Small, {}, 30.0};
  Matrix<double> loss(2, 2);
  loss(0, 0) = 100;
  loss(0, 1) = 80;
  loss(1, 0) = 110;
  loss(1, 1) = 70;
  ProblemConfig cfg;
  cfg.i_th_dbm = i_th_dbm;
  return make_problem(make_explicit_scenario(bss, loss), PowerControlParams{}, cfg);
}

}  // namespace

TEST_CASE("oracle on the two-BS instance") {
  const auto p = two_bs(-120.0);
  const auto jd = oracle_exhaustive(p, Scheme::JD);
  CHECK(jd.serving_bs == std::vector<std::size_t>{1, 1});
  CHECK(jd.objective_mw == doctest::Approx(1.2758485742824658e-13).epsilon(1e-9));
  const auto dd = oracle_exhaustive(p, Scheme::DD);
  CHECK(dd.objective_mw == doctest::Approx(2.5516971485649316e-13).epsilon(1e-9));
  CHECK(oracle_exhaustive(p, Scheme::HD).joint_count == 1);
  CHECK(oracle_exhaustive(two_bs(-130.0), Scheme::HD).joint_count == 0);
}

TEST_CASE("oracle respects capacities") {
  auto p = two_bs(-120.0);
  p.capacity = {1, 1};
  const auto dd = oracle_exhaustive(p, Scheme::DD);
  CHECK(dd.serving_bs[0] != dd.serving_bs[1]);
  CHECK(oracle_exhaustive(p, Scheme::HD).joint_count == 0);
}

TEST_CASE("oracle guard and JC") {
  std::vector<BaseStation> bss(23);
  const auto p = make_problem(make_explicit_scenario(bss, Matrix<double>(20, 23, 90.0)),
                              PowerControlParams{}, ProblemConfig{});
  CHECK_THROWS_AS(oracle_exhaustive(p, Scheme::DD), OracleGuardError);
  CHECK_THROWS_AS(oracle_exhaustive(two_bs(-130.0), Scheme::JC), std::invalid_argument);
}
