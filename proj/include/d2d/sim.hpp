#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "d2d/assoc.hpp"
#include "d2d/radio.hpp"
#include "d2d/topology.hpp"

namespace d2d {

struct MonteCarloConfig {
  std::size_t runs = 100;
  std::vector<double> link_lengths_m{10,  20,  30,  40,  50,  60,  70, 80,
                                     90,  100, 110, 120, 130, 140, 150};
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  std::uint64_t base_seed = 1;
  std::size_t links_per_run = 336;
  // Link length whose transmit-power samples feed the CDF output.
  double cdf_link_length_m = 100.0;
  // Worker threads for independent (length, run) cells; 0 = hardware.
  std::size_t threads = 0;
};

// Throws ConfigError on runs == 0, empty/non-ascending/non-positive
// lengths, an empty or duplicated scheme list.
void validate(const MonteCarloConfig& cfg);

struct MetricsRecord {
  Scheme scheme = Scheme::DD;
  double link_length_m = 0.0;
  // Mean over runs of the per-run mean per-device interference.
  double mean_ul_interference_mw = 0.0;
  // Mean over runs of blocked RBs divided by the BS count.
  double mean_rb_per_bs = 0.0;
  // 10 log10(scheme / DD) at the same length; NaN without DD.
  double normalized_interference_db = 0.0;
  std::vector<double> tx_power_samples_dbm;
  std::size_t runs = 0;
  std::size_t optimal_runs = 0;
};

// One record per (scheme, length), ordered by scheme (JC, JD, DD, HD) and
// then ascending length.
struct BinnedSeries {
  std::vector<MetricsRecord> records;

  const MetricsRecord* find(Scheme scheme, double length_m) const;
};

// Seed of one sweep cell: base_seed XOR a SplitMix64 hash of the length's
// bit pattern and the run index. Cells never share or shift seeds when
// lengths, runs or schemes are added elsewhere in the sweep.
std::uint64_t cell_seed(std::uint64_t base_seed, double length_m,
                        std::size_t run);

// Runs every (length, run) cell, solving each scheme on the same scenario.
// Deterministic for a fixed configuration regardless of thread count.
// Solver infeasibility is rethrown as InfeasibleError carrying the seed and
// length of the failing cell.
BinnedSeries run_monte_carlo(const MonteCarloConfig& cfg,
                             const TopologyConfig& topo,
                             const PowerControlParams& params,
                             const ProblemConfig& problem_cfg);

// Empirical CDF at the distinct sorted sample values.
std::vector<std::pair<double, double>> tx_power_cdf(
    std::vector<double> samples_dbm);

// Blocked RBs per BS: 1 per co-associated link, 2 per split link.
double resource_usage(const AssociationProblem& problem,
                      const Assignment& assignment);

// Transmit power of every device at its serving BS.
std::vector<double> device_tx_powers_dbm(const AssociationProblem& problem,
                                         const PowerControlParams& params,
                                         const Assignment& assignment);

}  // namespace d2d
