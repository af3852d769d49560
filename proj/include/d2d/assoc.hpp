#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/matrix.hpp"
#include "d2d/radio.hpp"
#include "d2d/topology.hpp"

namespace d2d {

enum class Scheme { JC, JD, DD, HD };

inline constexpr std::array<Scheme, 4> kAllSchemes{Scheme::JC, Scheme::JD,
                                                   Scheme::DD, Scheme::HD};

std::string_view to_string(Scheme s);
// Accepts "jc"/"JC" etc. Throws ConfigError otherwise.
Scheme parse_scheme(std::string_view name);

// How JC combines the two DL received powers of a pair.
enum class JcRule { LinearMean, MinOfPair };

// Order in which a link's "closest" BSs are ranked for HD joint placement.
enum class CandidateRank { PairInterference, MeanPathloss };

struct ProblemConfig {
  int capacity_per_bs = 50;
  std::vector<int> capacity_override;  // per BS; empty = uniform
  double i_th_dbm = -130.0;
  int n_closest = 4;
  JcRule jc_rule = JcRule::LinearMean;
  CandidateRank candidate_rank = CandidateRank::PairInterference;
  std::size_t node_budget = 1'000'000;
};

struct AssociationProblem {
  std::vector<std::array<std::size_t, 2>> link_devices;
  InterferenceTables tables;   // empty when the deployment has one BS
  std::vector<int> capacity;   // K_b per BS
  double i_th_mw = 1e-13;
  int n_closest = 4;
  Matrix<double> dl_rx_dbm;    // device x BS
  Matrix<double> loss_db;      // device x BS, ranks HD candidates
  JcRule jc_rule = JcRule::LinearMean;
  CandidateRank candidate_rank = CandidateRank::PairInterference;
  std::size_t node_budget = 1'000'000;

  std::size_t num_links() const { return link_devices.size(); }
  std::size_t num_devices() const { return 2 * link_devices.size(); }
  std::size_t num_bs() const { return capacity.size(); }
};

// Assembles a problem from a scenario. Interference tables are built only
// when the scenario has at least two BSs.
AssociationProblem make_problem(const Scenario& scenario,
                                const PowerControlParams& params,
                                const ProblemConfig& cfg);

struct Assignment {
  std::vector<std::size_t> serving_bs;              // per device
  std::vector<std::optional<std::size_t>> joint_bs;  // per link
  double objective_mw = 0.0;
  std::size_t joint_count = 0;
  bool optimal = true;
};

// Rule-based baseline: each link goes to the BS with the best combined DL
// received power, links with the strongest preference claiming BSs first.
Assignment solve_jc(const AssociationProblem& problem);

// Links placed jointly, minimizing the summed link interference.
Assignment solve_jd(const AssociationProblem& problem);

// Devices placed independently, minimizing summed device interference.
Assignment solve_dd(const AssociationProblem& problem);

// Maximizes the number of joint links under the interference threshold,
// then minimizes total interference. Branch-and-bound; `optimal` is false
// when the node budget ran out.
Assignment solve_hd(const AssociationProblem& problem);

Assignment solve(const AssociationProblem& problem, Scheme scheme);

// Sum of per-device interference under the assignment's serving BSs.
double total_interference_mw(const AssociationProblem& problem,
                             const Assignment& assignment);

// Number of RBs the assignment blocks network-wide: 1 per co-associated
// link, 2 otherwise.
std::size_t resource_blocks(const AssociationProblem& problem,
                            const Assignment& assignment);

// HD candidate BSs of link `l`: the n_closest BSs under the problem's
// candidate ranking (pair interference or mean pathloss), ties to the
// lowest id.
std::vector<std::size_t> hd_candidates(const AssociationProblem& problem,
                                       std::size_t l);

// Pair interference of link `l` at `bs`, compared against i_th_mw.
double pair_interference_mw(const AssociationProblem& problem, std::size_t l,
                            std::size_t bs);

// Independent constraint check. Returns the violations found; empty means
// the assignment is feasible for the scheme.
std::vector<std::string> validate_assignment(const AssociationProblem& problem,
                                             Scheme scheme,
                                             const Assignment& assignment);

}  // namespace d2d
