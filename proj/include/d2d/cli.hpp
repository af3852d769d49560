#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "d2d/assoc.hpp"
#include "d2d/config.hpp"
#include "d2d/sim.hpp"

namespace d2d {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitOracleMismatch = 3,
};

// Shortest-6-significant-digit rendering used in every CSV.
std::string format_real(double x);

void write_assignment_csv(std::ostream& out, const AssociationProblem& problem,
                          const Assignment& assignment);
void write_interference_csv(std::ostream& out, const BinnedSeries& series);
void write_resources_csv(std::ostream& out, const BinnedSeries& series);
// CDF rows for the sweep length closest to cdf_length_m.
void write_txpower_cdf_csv(std::ostream& out, const BinnedSeries& series,
                           double cdf_length_m);
void write_scenario_csvs(const std::filesystem::path& dir, const Scenario& sc);

// Solvers exercised by oracle-check; tests swap in faulty ones.
struct OracleCheckSolvers {
  std::function<Assignment(const AssociationProblem&)> jd = solve_jd;
  std::function<Assignment(const AssociationProblem&)> dd = solve_dd;
  std::function<Assignment(const AssociationProblem&)> hd = solve_hd;
};

// Random instance with 2-3 BSs and 2-4 links, random losses, capacities,
// threshold and n_closest.
AssociationProblem random_small_problem(std::uint64_t seed,
                                        const PowerControlParams& params);

// Compares the solvers with oracle_exhaustive on `trials` random instances.
// Returns kExitOk or kExitOracleMismatch; every mismatch is reported with
// its trial seed.
int cmd_oracle_check(const PowerControlParams& params, std::size_t trials,
                     std::uint64_t seed, std::ostream& out,
                     const OracleCheckSolvers& solvers = {});

int cmd_solve(const RunConfig& cfg, Scheme scheme, std::uint64_t seed,
              const std::filesystem::path& out_dir, std::ostream& out);

int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& out);

int cmd_generate(const RunConfig& cfg, std::uint64_t seed,
                 const std::filesystem::path& out_dir, std::ostream& out);

// Full command-line entry point; maps errors onto ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace d2d
